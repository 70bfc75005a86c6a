"""Registry the acceptance tests write to and the terminal summary reads from."""

RESULTS: list[tuple[str, str, bool]] = []


def record(criterion: str, description: str, passed: bool) -> None:
    RESULTS.append((criterion, description, passed))
