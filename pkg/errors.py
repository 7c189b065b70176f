"""
Exception hierarchy shared by the library, the CLI and the HTTP API
"""


class GTRiskError(Exception):
    """Base class for every error raised by this toolkit"""


class ValidationError(GTRiskError, ValueError):
    """A precondition on an input failed"""


class DomainError(ValidationError):
    """Argument outside the domain of a special function"""


class ConfigurationError(GTRiskError):
    """An environment setting cannot be used"""


class OracleTooLargeError(GTRiskError):
    """The brute-force enumeration would exceed its guard"""


class SupportOverflowError(GTRiskError):
    """The extremal distribution needs more symbols than the alphabet has"""
