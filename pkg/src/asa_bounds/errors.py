"""Exceptions du moteur. Chaque famille porte le code de sortie CLI associé."""


class AsaError(Exception):
    exit_code = 1


# --- entrées (code 2) ---
class InputError(AsaError):
    exit_code = 2


class ParseError(InputError):
    pass


class ConfigError(InputError):
    pass


# --- invariants violés (code 3) ---
class InvariantError(AsaError):
    exit_code = 3


class CompositionError(InvariantError):
    pass


class GroupAxiomError(InvariantError):
    pass


class GroupOrderError(InvariantError):
    pass


class SubgroupError(InvariantError):
    pass


class NonCyclicError(InvariantError):
    pass


class ModuleError(InvariantError):
    pass


class EquivarianceError(InvariantError):
    pass


class PrimeError(InvariantError):
    pass


class PlaceSetError(InvariantError):
    pass


class DensityError(InvariantError):
    pass


class CatalogError(InvariantError):
    pass


class HypothesisError(InvariantError):
    pass
