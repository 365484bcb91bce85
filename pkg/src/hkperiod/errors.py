"""Domain errors carrying a machine-readable clause."""

# Every clause string a DomainError may carry. The CLI emits these verbatim.
CLAUSES = frozenset({
    "dimension",
    "zero-vector",
    "isotropy",
    "positivity",
    "degenerate",
    "not-orthogonal",
    "not-generic",
    "coincident",
    "membership",
    "retry-exhausted",
    "norm",
    "signature",
    "not-representable",
    "unknown-key",
    "invalid-parameter",
    "lattice-mismatch",
    "not-isometry",
    "rank-bound",
    "invalid-chain",
})


class DomainError(ValueError):
    """Raised when an input violates a mathematical precondition."""

    def __init__(self, clause, message=""):
        if clause not in CLAUSES:
            raise AssertionError(f"undocumented clause {clause!r}")
        self.clause = clause
        super().__init__(f"{clause}: {message}" if message else clause)
