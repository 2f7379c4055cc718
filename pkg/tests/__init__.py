"""albench test suite."""
