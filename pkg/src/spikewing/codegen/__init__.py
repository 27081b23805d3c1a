from .emit import ExportArtifact, emit, write_artifact
from .validate import ValidationReport, validate_export, compile_with_harness

__all__ = ["ExportArtifact", "emit", "write_artifact",
           "ValidationReport", "validate_export", "compile_with_harness"]
