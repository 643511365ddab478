"""Exception hierarchy shared across the pipeline."""

from __future__ import annotations


class SqlCorpusError(Exception):
    """Base class for every error the pipeline raises on purpose.

    ``exit_code`` is what the CLI returns when the error escapes to the top
    level: 3 for environment problems (missing files, unreachable services),
    1 for everything else.
    """

    exit_code = 1


class CatalogError(SqlCorpusError):
    """Malformed catalog input (duplicate tables, empty tables, bad fields)."""


class ReferentialError(CatalogError):
    """A relationship or anchor references a table/column that does not exist."""


class UnsupportedTypeError(CatalogError):
    """A column declares a data type outside the supported enumeration."""


class DdlError(CatalogError):
    """DDL text outside the supported CREATE TABLE subset."""


class ResolutionError(SqlCorpusError):
    """An anchor or column reference cannot be resolved against the catalog."""


class ExpansionError(SqlCorpusError):
    """A template uses a placeholder with no substitution set."""


class TemplateError(SqlCorpusError):
    """A template is internally inconsistent or expands to unparseable SQL."""


class DiversificationError(SqlCorpusError):
    """No usable source of instruction variants (client down, no fallback)."""

    exit_code = 3


class PoolSizeError(DiversificationError):
    """A static variant file is too small for the requested pool size."""

    exit_code = 1


class SqlSyntaxError(SqlCorpusError):
    """SQL text outside the supported grammar.

    ``position`` is the character offset of the first offending token.
    """

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class AmbiguityError(SqlCorpusError):
    """An unqualified column resolves to more than one table."""


class TagCollisionError(SqlCorpusError):
    """Sample content contains a structural tag substring."""


class StructureError(SqlCorpusError):
    """A prompt sample is missing (or wrongly carries) a field for its structure."""


class PromptParseError(SqlCorpusError):
    """Rendered prompt text does not follow its declared structure.

    ``offset`` points at the first byte that broke the expected tag sequence.
    """

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ManifestCollisionError(SqlCorpusError):
    """A catalog name collides with a structural tag string."""


class StratificationError(SqlCorpusError):
    """A stratum is smaller than its test quota."""


class LadderError(SqlCorpusError):
    """A requested subset size exceeds the available corpus."""


class FixtureIntegrityError(SqlCorpusError):
    """A gold query failed on its fixture database; the run must halt."""


class EvalEnvironmentError(SqlCorpusError):
    """The fixture database (or another required file) is missing."""

    exit_code = 3


class ConfigError(SqlCorpusError):
    """Pipeline configuration is invalid or references missing paths."""

    exit_code = 3
