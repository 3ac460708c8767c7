"""Exception taxonomy shared by all modules."""


class CRBlochError(Exception):
    """Base class for all library errors."""


# --- number field construction / arithmetic ---

class ReducibleError(CRBlochError):
    """Defining polynomial is not irreducible (or not squarefree)."""


class SigmaError(CRBlochError):
    """Conjugation data does not define a conjugation automorphism."""


class DivisionByZero(CRBlochError):
    pass


class FieldMismatch(CRBlochError):
    """Operands belong to different number fields."""


class UnsupportedField(CRBlochError):
    """Operation restricted to Q or imaginary quadratic fields."""


class ZeroElement(CRBlochError):
    """Valuations of zero are undefined."""


# --- geometry ---

class NotGeneric(CRBlochError):
    """Points coincide or a triple lies on a C-circle."""


class DegenerateCrossRatio(CRBlochError):
    """A cross-ratio landed in {0, 1}."""


class OutsideK(CRBlochError):
    """Normalized parameters violate the admissible set."""


class FieldLacksI(CRBlochError):
    """A square root of -1 is required but cannot be realized."""


class CartanMismatch(CRBlochError):
    """Triples with different Cartan invariants cannot be paired."""


class FieldExtensionRequired(CRBlochError):
    """Result does not live in the ambient field."""


# --- pre-Bloch group / certificates ---

class DegenerateArgument(CRBlochError):
    """Relation or generator argument in a forbidden value set."""


class IllegalRelationInMode(CRBlochError):
    """Relation kind not admitted by the verification mode."""


class OutsideFamily(CRBlochError):
    """Parameter outside the one-parameter solution family."""


# --- wedge ---

class UnfactoredElement(CRBlochError):
    """Element does not factor over the constructed basis."""


# --- triangulations ---

class MissingPairings(CRBlochError):
    """Operation needs a fully face-paired complex."""


class InconsistentStructure(CRBlochError):
    """Stored cross-ratio data contradicts itself under development."""


class MissingGeometry(CRBlochError):
    """Operation needs vertex points (present or developable)."""


# --- numerics / io ---

class PrecisionExhausted(CRBlochError):
    """Requested enclosure cannot be produced at this precision."""


class ParseError(CRBlochError):
    """Malformed input file."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column
