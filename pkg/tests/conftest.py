from _instances import RESULTS

CRITERIA = {
    "C1": "exhaustive oracle equivalence, n = 3 and 4",
    "C2": "randomized oracle equivalence, all roots",
    "C3": "variant agreement branch / naive / memo",
    "C4": "witness validity",
    "C5": "rule and branching soundness on state snapshots",
    "C6": "measure audit",
    "C7": "measure constants",
    "C8": "scaling smoke at n = 18 (informational)",
}


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance")
    for cid, title in CRITERIA.items():
        if cid not in RESULTS:
            terminalreporter.write_line(f"{cid} NOT RUN  {title}")
            continue
        ok, detail = RESULTS[cid]
        terminalreporter.write_line(f"{cid} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
