"""distfree test suite."""
