"""ofskit: leveled finite-state models for phonotactics.

The toolkit encodes multi-level regular grammars whose lowest level holds
finite string sets, instantiates language-independent prototypes from
corpora of stress-marked syllabified transcriptions, generalises them by
similarity-threshold clustering of the string sets, and analyses the
results (statistics, cluster trees, membership, exact counting).
"""

from .errors import (
    BudgetExceeded,
    EmptyCorpus,
    FormatError,
    InvalidModel,
    OfsError,
    PatternSyntaxError,
    UndefinedSimilarity,
    UnknownClass,
    UnknownToken,
    UnprunedModel,
    UntokenizableInput,
)
from .model import (
    Alt,
    Concat,
    Derivation,
    EPSILON,
    Epsilon,
    EmptyModel,
    Expr,
    ObjectName,
    ObjectSet,
    OFSModel,
    Plus,
    Ref,
    Rule,
    SEPARATOR,
    STRESS,
    Star,
    Violation,
    alt,
    canonicalize,
    canonicalize_model,
    cat,
    plus,
    ref,
    star,
    validate_model,
)
from .automaton import Automaton, compile_model
from .derivations import parse
from .patterns import (
    ContextPattern,
    Lit,
    SetFormer,
    TokenClassTable,
    Var,
    match_captures,
    parse_former,
    serialize_former,
)
from .corpus import AlphabetSpec, Reject, WordForm, ingest, read_corpus, tokenize
from .instantiate import PrototypeModel, instantiate, prune
from .generalise import (
    Dendrogram,
    MergeRecord,
    Partition,
    SimilarityMatrix,
    cluster_partition,
    dendrogram,
    generalise,
    similarity,
    similarity_matrix,
    sweep,
)
from .analysis import (
    ClassStats,
    CountReport,
    IntersectionTable,
    class_stats,
    count_derivations,
    count_distinct,
    count_report,
    enumerate_derivations,
    intersection_table,
)
from .fileformat import (
    load_model,
    load_prototype,
    parse_model_text,
    parse_prototype_text,
    save_model,
    save_prototype,
    serialize_model,
    serialize_prototype,
)

__version__ = "0.1.0"
