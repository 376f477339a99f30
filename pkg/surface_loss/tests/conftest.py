def pytest_configure(config):
    config.addinivalue_line("markers", "slow: refined field solves and repeated bootstrap trials")
