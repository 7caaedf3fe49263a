"""Exception hierarchy. Every error carries a stable machine-readable ``code``."""


class IceError(Exception):
    code = "IceError"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class IoError(IceError):
    code = "IoError"


class EmptyFile(IceError):
    code = "EmptyFile"


class MissingColumn(IceError):
    code = "MissingColumn"


class NonNumericCell(IceError):
    code = "NonNumericCell"

    def __init__(self, row: int, message: str = ""):
        self.row = row
        super().__init__(message or f"non-numeric or non-finite value on row {row}")


class UnknownArmCode(IceError):
    code = "UnknownArmCode"

    def __init__(self, row: int, message: str = ""):
        self.row = row
        super().__init__(message or f"unknown treatment code on row {row}")


class ArmTooSmall(IceError):
    code = "ArmTooSmall"

    def __init__(self, arm, message: str = ""):
        self.arm = arm
        super().__init__(message or f"arm {arm} has fewer than 2 patients")


class InvalidShadowPrice(IceError):
    code = "InvalidShadowPrice"


class ZeroEffeVariance(IceError):
    code = "ZeroEffeVariance"


class InvalidMap(IceError):
    code = "InvalidMap"


class BadReplicationCount(IceError):
    code = "BadReplicationCount"


class OriginPoint(IceError):
    code = "OriginPoint"


class OriginObserved(IceError):
    code = "OriginObserved"


class WedgeDegenerate(IceError):
    code = "WedgeDegenerate"


class BadConfidence(IceError):
    code = "BadConfidence"


class OutsideBracket(IceError):
    code = "OutsideBracket"


class DuplicateName(IceError):
    code = "DuplicateName"


class ConfigError(IceError):
    code = "ConfigError"
