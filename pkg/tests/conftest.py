def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "_acceptance_results", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for index in sorted(results):
        terminalreporter.write_line(results[index])
    passed = sum(" PASS " in line for line in results.values())
    terminalreporter.write_line(f"{passed}/{len(results)} criteria pass")
