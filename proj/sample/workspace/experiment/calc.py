"""Small arithmetic helpers used by the sample workspace."""


def add(a, b):
    return a + b


def multiply(a, b):
    total = 0
    for _ in range(abs(b)):
        total = add(total, a)
    if b < 0:
        total = -total
    return total


def fibonacci(n):
    if n < 0:
        raise ValueError("n must be non-negative")
    if n < 2:
        return n
    return fibonacci(n - 1) + fibonacci(n - 2)


def average(values):
    if not values:
        return 0.0
    return sum(values) / len(values)
