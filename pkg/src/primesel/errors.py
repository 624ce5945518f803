"""Exception types shared across the package."""


class PrimeselError(Exception):
    """Base class for all errors raised by this package."""


class ProfileFormatError(PrimeselError):
    """A profile, selection, or plan document does not match its schema."""


class InvalidProfileError(PrimeselError):
    """A profile failed consistency validation and cannot be solved."""


class MissingTransformCost(PrimeselError):
    """No layout transform cost is known for a required layout pair."""

    def __init__(self, from_layout: str, to_layout: str, layer_id: str | None = None):
        self.from_layout = from_layout
        self.to_layout = to_layout
        self.layer_id = layer_id
        where = f" at layer '{layer_id}'" if layer_id is not None else ""
        super().__init__(f"no transform cost for {from_layout}->{to_layout}{where}")


class InvalidSelectionError(PrimeselError):
    """A selection does not assign exactly one in-range candidate per layer."""


class InvalidRequestError(PrimeselError):
    """A solve request carries a budget on the wrong side of its mode."""


class NotAChainError(PrimeselError):
    """An operation restricted to chain topologies was given a DAG with forks or joins."""


class InfeasibleError(PrimeselError):
    """No selection can satisfy the supplied budget."""


class MissingFamilyError(PrimeselError):
    """A uniform selection was requested for a family absent from some layer."""

    def __init__(self, family: str, layer_id: str):
        self.family = family
        self.layer_id = layer_id
        super().__init__(f"layer '{layer_id}' has no candidate of family '{family}'")


class CapExceededError(PrimeselError):
    """The assignment space is larger than the enumeration cap."""
