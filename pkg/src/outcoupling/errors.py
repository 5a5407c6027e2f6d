"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain of a function."""


class PoleError(DomainError):
    """Argument sits on a pole of a closed form."""


class BracketError(ValueError):
    """Root bracket does not enclose a sign change."""


class ConvergenceError(RuntimeError):
    """A numerical kernel failed to reach its tolerance.

    ``kernel`` names the routine and ``params`` holds the inputs that failed,
    so the CLI can report them.
    """

    def __init__(self, kernel, message, **params):
        self.kernel = kernel
        self.params = params
        detail = ", ".join(f"{k}={v!r}" for k, v in params.items())
        super().__init__(f"{kernel}: {message}" + (f" ({detail})" if detail else ""))
