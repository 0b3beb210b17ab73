"""Exception hierarchy shared by every semnav module."""


class SemnavError(Exception):
    """Base class for all errors raised by semnav."""


class AspError(SemnavError):
    """Errors raised while reading, grounding or solving a logic program."""


class AspSyntaxError(AspError):
    def __init__(self, line, column, message):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"{line}:{column}: {message}")


class UnsupportedAggregate(AspSyntaxError):
    """An aggregate function other than ``#count`` was used."""


class SafetyError(AspError):
    def __init__(self, rule_index, variable, line=None, column=None):
        self.rule_index = rule_index
        self.variable = variable
        self.line = line
        self.column = column
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"rule {rule_index}{where}: unsafe variable {variable}")


class ArityError(AspError):
    def __init__(self, predicate, expected, found):
        self.predicate = predicate
        self.expected = expected
        self.found = found
        super().__init__(
            f"predicate {predicate} used with arity {found}, first used with arity {expected}"
        )


class DomainOverflow(AspError):
    """Grounding produced more rules than the configured cap."""


class ResourceExceeded(AspError):
    """The solver's decision budget ran out."""


class MalformedModel(SemnavError):
    """An answer set does not describe exactly one kind and maneuver per junction."""


class WorldError(SemnavError, ValueError):
    """Invalid road world or instruction."""


class LengthMismatch(WorldError):
    pass


class LlmError(SemnavError):
    """Failure while obtaining or post-processing a model completion."""


class TransportError(LlmError):
    pass


class AuthError(LlmError):
    pass


class ProviderError(LlmError):
    pass


class LlmTimeoutError(LlmError, TimeoutError):
    pass


class FixtureNotFound(LlmError):
    def __init__(self, path):
        self.path = path
        super().__init__(f"fixture not found: {path}")


class EmptyExtraction(LlmError):
    pass


class ConfigError(SemnavError):
    """Invalid experiment specification or harness configuration."""
