"""Exception hierarchy for apksift."""


class ApkSiftError(Exception):
    """Base class for all fatal apksift errors (CLI maps these to exit code 2)."""


class CorpusError(ApkSiftError):
    pass


class ManifestMissing(CorpusError):
    """A sample has no manifest file at the canonical location."""

    def __init__(self, sample_id: str):
        super().__init__(f"sample {sample_id!r} has no AndroidManifest.xml")
        self.sample_id = sample_id


class CatalogError(ApkSiftError):
    pass


class RankingError(ApkSiftError):
    pass


class ModelError(ApkSiftError):
    pass


class EvaluationError(ApkSiftError):
    pass


class GenerationError(ApkSiftError):
    pass
