"""Discussion forums coded by keyword and modeled as epistemic networks."""

from .codebook import (
    Codebook,
    CodebookEdit,
    CodebookError,
    Keyword,
    Topic,
    apply_batch,
    apply_edit,
    build_codebook,
    make_keyword,
    validate,
)
from .coder import CodedUtterance, code_corpus, code_post
from .ena import (
    EnaModel,
    UnitResult,
    accumulate,
    build_model,
    individual_network,
    place_nodes,
    project,
    sphere_normalize,
)
from .ingestion import (
    CanvasClient,
    DiscussionSummary,
    Post,
    canvas_links,
    export_csv,
    import_csv,
)
from .lda import LdaModel, extract_codebook, fit_lda
from .textprep import (
    CollocationTable,
    Token,
    TokenizedDoc,
    detect_collocations,
    preprocess_corpus,
    remove_stopwords,
    stem,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "Codebook",
    "CodebookEdit",
    "CodebookError",
    "CodedUtterance",
    "CollocationTable",
    "CanvasClient",
    "DiscussionSummary",
    "EnaModel",
    "Keyword",
    "LdaModel",
    "Post",
    "Token",
    "TokenizedDoc",
    "Topic",
    "UnitResult",
    "accumulate",
    "apply_batch",
    "apply_edit",
    "build_codebook",
    "build_model",
    "canvas_links",
    "code_corpus",
    "code_post",
    "detect_collocations",
    "export_csv",
    "extract_codebook",
    "fit_lda",
    "import_csv",
    "individual_network",
    "make_keyword",
    "place_nodes",
    "preprocess_corpus",
    "project",
    "remove_stopwords",
    "sphere_normalize",
    "stem",
    "tokenize",
    "validate",
]
