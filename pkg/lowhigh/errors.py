"""Exceptions raised by the lowhigh library.

Library code raises these and never exits; lowhigh.cli maps them to exit
codes.
"""


class LowHighError(Exception):
    pass


class ParseError(LowHighError):
    def __init__(self, lineno, reason):
        self.lineno = lineno
        self.reason = reason
        super().__init__(f"line {lineno}: {reason}")


class IdOutOfRange(LowHighError):
    def __init__(self, vertex, n):
        self.vertex = vertex
        self.n = n
        super().__init__(f"vertex id {vertex} outside [1, {n}]")


class Unreachable(LowHighError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} is unreachable from the start vertex")


class NoChildren(LowHighError):
    pass


class InvariantViolation(LowHighError):
    """A maintained property failed; `check` names the property."""

    def __init__(self, check, detail=""):
        self.check = check
        self.detail = detail
        super().__init__(f"{check}: {detail}" if detail else check)


class StuckPeel(LowHighError):
    pass


class InvalidForest(LowHighError):
    pass


class NotStronglyConnected(LowHighError):
    pass


class Not2VC(LowHighError):
    pass


class SaturatedGraph(LowHighError):
    pass


class VerificationFailure(LowHighError):
    """First failing check of a verified run, with enough to replay it."""

    def __init__(self, index, check, seed=None, graph=None, detail=""):
        self.index = index
        self.check = check
        self.seed = seed
        self.graph = graph
        self.detail = detail
        msg = f"insertion {index}: {check} failed"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)

    def replay(self):
        return (self.graph, self.seed, self.index)
