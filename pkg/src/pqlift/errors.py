"""Exception hierarchy.

Input problems map to exit status 1, broken internal identities to exit
status 3 (see :mod:`pqlift.cli`).
"""


class PqliftError(Exception):
    """Base class. ``module`` tags the stage that raised."""

    module = "pqlift"

    def __init__(self, *args, module=None):
        super().__init__(*args)
        if module is not None:
            self.module = module

    def __str__(self):
        return f"[{self.module}] {super().__str__()}"


class InputError(PqliftError, ValueError):
    """The user's data is malformed or violates a precondition."""


class GeometryError(InputError):
    module = "lattice"


class FanError(InputError):
    module = "fan"


class NonUnimodularError(FanError):
    def __init__(self, triangle, determinant):
        self.triangle = tuple(triangle)
        self.determinant = determinant
        super().__init__(
            f"triangle {self.triangle} is not unimodular (determinant {determinant})"
        )


class ClassError(InputError):
    module = "classes"


class WebError(InputError):
    module = "web"


class NonKaehlerError(WebError):
    def __init__(self, edges):
        self.edges = list(edges)
        listing = ", ".join(str(e) for e in self.edges)
        super().__init__(
            f"class is not Kaehler: nonpositive degree on {listing} "
            "(set allow_non_kaehler to proceed)"
        )


class ParseError(InputError):
    module = "cli_io"

    def __init__(self, message, location="$"):
        self.location = location
        self.message = message
        super().__init__(f"{location}: {message}")


class ConsistencyError(PqliftError, RuntimeError):
    """An identity that must hold exactly did not.

    Either a bug or input that slipped past validation.
    """


class HolonomyError(ConsistencyError):
    module = "web"
