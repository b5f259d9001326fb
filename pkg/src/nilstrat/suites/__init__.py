"""Property suites run by ``nilstrat selftest``."""
