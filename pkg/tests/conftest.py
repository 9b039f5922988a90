def pytest_terminal_summary(terminalreporter):
    module = None
    for name, mod in list(__import__("sys").modules.items()):
        if name.endswith("test_acceptance") and hasattr(mod, "RESULTS"):
            module = mod
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        for line in module.RESULTS[number]:
            terminalreporter.write_line(line)
