"""Exception types shared across the toolkit."""


class OfsError(Exception):
    """Base class for all toolkit errors."""


class InvalidModel(OfsError):
    """A model failed validation where a valid model was required."""

    def __init__(self, violations, message="model is not valid"):
        self.violations = list(violations)
        detail = "; ".join(str(v) for v in self.violations)
        super().__init__(f"{message}: {detail}" if detail else message)


class FormatError(OfsError):
    """Malformed model, prototype, alphabet or corpus text."""

    def __init__(self, message, *, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += str(path)
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)


class PatternSyntaxError(FormatError):
    """Malformed set-former pattern text."""

    def __init__(self, message, *, line=1, col=1):
        self.col = col
        super().__init__(f"{message} (col {col})", line=line)


class UnknownToken(OfsError):
    """Input contains a token outside the relevant token inventory."""


class UnknownClass(OfsError):
    """A pattern references a token class that is not defined."""


class UntokenizableInput(OfsError):
    """A line cannot be segmented into known tokens."""

    def __init__(self, message, *, offset):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")


class EmptyCorpus(OfsError):
    """Instantiation was attempted with no data."""


class UndefinedSimilarity(OfsError):
    """Set similarity of two empty sets is undefined."""


class UnprunedModel(OfsError):
    """An operation requiring a pruned model found an empty object set."""


class BudgetExceeded(OfsError):
    """Determinization exceeded the configured state budget."""

    def __init__(self, budget):
        self.budget = budget
        super().__init__(f"state budget exceeded ({budget} states)")
