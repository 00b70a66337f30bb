"""Exception types shared across the package."""


class SievelabError(Exception):
    """Base class for all sievelab errors."""


class InvalidDegree(SievelabError):
    pass


class NonSquarefreeDiscriminant(SievelabError):
    pass


class DimensionMismatch(SievelabError):
    pass


class RankDeficient(SievelabError):
    pass


class RingMismatch(SievelabError):
    pass


class NormTooLarge(SievelabError):
    pass


class NotCoprime(SievelabError):
    def __init__(self, i=None, j=None, msg=None):
        self.i = i
        self.j = j
        super().__init__(msg or f"ideals not coprime (indices {i}, {j})")


class EmptyInput(SievelabError):
    pass


class WindowTooLarge(SievelabError):
    pass


class InvalidSchedule(SievelabError):
    pass


class WrongRing(SievelabError):
    pass


class ImproperTerm(SievelabError):
    def __init__(self, index=None, msg=None):
        self.index = index
        super().__init__(msg or f"term {index} covers every residue class")


class UnknownCatalogEntry(SievelabError):
    pass


class InvalidParams(SievelabError):
    pass


class ModulusTooLarge(SievelabError):
    pass


class PatternTooLarge(SievelabError):
    pass


class NotAdmissiblePattern(SievelabError):
    pass


class InsufficientTerms(SievelabError):
    pass


class InvalidCapacity(SievelabError):
    pass


class ConfigError(SievelabError):
    pass
