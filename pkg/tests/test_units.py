import pytest
from hypothesis import given
from hypothesis import strategies as st

from disagg.errors import ConfigError
from disagg.units import fmt_bytes, fmt_rate, parse_bytes, parse_rate, parse_seconds


@pytest.mark.parametrize(
    "text,expected",
    [
        ("4 TB", 4e12),
        ("4096 GB", 4.096e12),
        ("512GB", 512e9),
        ("2.5 MB", 2.5e6),
        ("100 KB", 100e3),
        ("63 B", 63.0),
        ("1e9", 1e9),
        (100, 100.0),
        (4.5, 4.5),
    ],
)
def test_parse_bytes(text, expected):
    assert parse_bytes(text) == expected


@pytest.mark.parametrize(
    "text,expected",
    [
        ("100 GB/s", 100e9),
        ("819.2 GB/s", 819.2e9),
        ("25GB/s", 25e9),
        ("6553.6 GB", 6553.6e9),
        (1e11, 1e11),
    ],
)
def test_parse_rate(text, expected):
    assert parse_rate(text) == expected


@pytest.mark.parametrize(
    "text,expected",
    [
        ("2 us", 2e-6),
        ("2us", 2e-6),
        ("2 µs", 2e-6),
        ("1.5 ms", 1.5e-3),
        ("300 ns", 3e-7),
        ("1 s", 1.0),
        (2e-6, 2e-6),
    ],
)
def test_parse_seconds(text, expected):
    assert parse_seconds(text) == pytest.approx(expected)


@pytest.mark.parametrize("bad", ["4 XB", "GB", "1..2 GB", "", "4 TB extra"])
def test_parse_bytes_rejects_garbage(bad):
    with pytest.raises(ConfigError):
        parse_bytes(bad)


def test_parse_errors_name_the_field():
    with pytest.raises(ConfigError, match="memory_node.capacity"):
        parse_bytes("4 QB", field="memory_node.capacity")


@given(st.floats(min_value=0.001, max_value=1e6, allow_nan=False))
def test_parse_is_idempotent_on_normalized_values(value):
    normalized = parse_bytes(f"{value} GB")
    assert parse_bytes(normalized) == normalized
    assert normalized == pytest.approx(value * 1e9)


def test_fmt_round_numbers():
    assert fmt_bytes(4e12) == "4 TB"
    assert fmt_bytes(512e9) == "512 GB"
    assert fmt_rate(100e9) == "100 GB/s"
