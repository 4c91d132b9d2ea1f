class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RegistryError(ValueError):
    """A field registry entry could not be parsed or is not irreducible."""
