"""Exception hierarchy shared by all restrictomaton modules."""


class RestrictomatonError(Exception):
    pass


# duplex algebra
class DuplexError(RestrictomatonError):
    pass


class MismatchedPair(DuplexError):
    pass


class GapInPairing(DuplexError):
    pass


class NoOverlap(DuplexError):
    pass


class IncompatibleEnds(DuplexError):
    pass


# enzymes
class InertSite(RestrictomatonError):
    """The enzyme binds the site but its cut window leaves the paired region."""


class InvalidHit(RestrictomatonError):
    pass


class UnknownEnzyme(RestrictomatonError):
    pass


# automata
class AutomatonSyntaxError(RestrictomatonError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class UnknownState(RestrictomatonError):
    pass


class NoInitial(RestrictomatonError):
    pass


class NotDeterministic(RestrictomatonError):
    pass


# compilation
class NoConsistentLayout(RestrictomatonError):
    def __init__(self, violated):
        super().__init__("no consistent layout: " + "; ".join(violated))
        self.violated = list(violated)


class InstantiationExhausted(RestrictomatonError):
    pass


class NotCompilable(RestrictomatonError):
    pass


# simulation
class AmbiguousStep(RestrictomatonError):
    def __init__(self, events):
        self.events = list(events)
        super().__init__(
            "more than one enabled event: " + ", ".join(e.describe() for e in self.events)
        )


class DepthExceeded(RestrictomatonError):
    def __init__(self, result):
        super().__init__(f"step budget exhausted after {len(result.events)} events")
        self.result = result
