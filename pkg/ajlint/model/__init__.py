from ajlint.model.builder import build_model
from ajlint.model.program import (
    AdviceDecl,
    AspectDecl,
    ClassDecl,
    ClassSymbol,
    Diagnostic,
    FieldDecl,
    IntrinsicSymbol,
    LocalSymbol,
    MethodDecl,
    ParentDecl,
    ProgramModel,
)

__all__ = [
    "AdviceDecl", "AspectDecl", "ClassDecl", "ClassSymbol", "Diagnostic", "FieldDecl",
    "IntrinsicSymbol", "LocalSymbol", "MethodDecl", "ParentDecl", "ProgramModel", "build_model",
]
