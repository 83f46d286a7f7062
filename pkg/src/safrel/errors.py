"""Exception types raised across the package."""


class SafrelError(Exception):
    pass


class EmptyCatalog(SafrelError):
    """A program filter admitted no catalog entry."""


class NonPositiveInput(SafrelError, ValueError):
    pass


class DegenerateInput(SafrelError):
    """Every rule in the rule base had zero support."""


class InapplicableAction(SafrelError, ValueError):
    pass


class EmptyActionSet(SafrelError, ValueError):
    pass


class ZeroVector(SafrelError, ValueError):
    pass


class MalformedPolicyFile(SafrelError):
    pass


class ConfigError(SafrelError, ValueError):
    pass
