import random

import pytest

HANDWRITTEN = [
    "z",
    "1/z^2",
    "exp(z)",
    "exp(z) + 2*pi*i",
    "exp(exp(z)) + 2*pi*i",
    "exp(2*z) + 2*pi*i",
    "z^2 + 0.25",
    "z^2 - 1",
    "-z^2",
    "(-z)^2",
    "z^-2",
    "z^(-3)",
    "z^2^3",
    "sin(z) + cos(z)",
    "cos(z)*sin(z) / (1 + z^2)",
    "exp(-z) * 0.5",
    "0.5*exp(i*z)",
    "(z - 1)/(z + 1)",
    "e*z",
    "2*z − 1",
]


def _random_expr(rng: random.Random, depth: int) -> str:
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(["z", "z", "i", "pi", "e", str(rng.randint(0, 9)), f"{rng.uniform(-3, 3):.3f}"])
    kind = rng.randrange(7)
    a = _random_expr(rng, depth - 1)
    if kind == 0:
        return f"({a} + {_random_expr(rng, depth - 1)})"
    if kind == 1:
        return f"{a} - {_random_expr(rng, depth - 1)}"
    if kind == 2:
        return f"{a}*{_random_expr(rng, depth - 1)}"
    if kind == 3:
        return f"({a})/({_random_expr(rng, depth - 1)})"
    if kind == 4:
        k = rng.choice([-3, -2, -1, 0, 1, 2, 3, 5])
        return f"({a})^{k}" if k >= 0 else f"({a})^({k})"
    if kind == 5:
        return f"{rng.choice(['exp', 'sin', 'cos'])}({a})"
    return f"-{a}"


def expression_corpus(n: int = 200, seed: int = 20240517) -> list[str]:
    rng = random.Random(seed)
    out = list(HANDWRITTEN)
    while len(out) < n:
        out.append(_random_expr(rng, 4))
    return out[:n]


@pytest.fixture(scope="session")
def corpus():
    return expression_corpus()


# ---------------------------------------------------------------- acceptance log

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def record(label: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
