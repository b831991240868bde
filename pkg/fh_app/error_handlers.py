"""
Exception hierarchy, FastAPI exception handlers and CLI exit codes.
"""

from fastapi import Request, HTTPException, status
from fastapi.responses import JSONResponse
from fastapi.exceptions import RequestValidationError
import logging
from typing import Union

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class SpectrumException(Exception):
    """Base exception for the spectrum toolkit"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, status_code: int = 500, detail: dict = None):
        self.message = message
        self.status_code = status_code
        self.detail = detail or {}
        super().__init__(self.message)


class InvalidParameterException(SpectrumException):
    """Raised when a physical or numerical parameter is out of range"""

    def __init__(self, name: str, value, reason: str, detail: dict = None):
        message = f"Invalid parameter '{name}' = {value!r}: {reason}"
        super().__init__(message, status.HTTP_400_BAD_REQUEST, detail)


class RegistryParseException(SpectrumException):
    """Raised for a malformed molecule registry row"""

    def __init__(self, row: Union[int, str], reason: str, detail: dict = None):
        message = f"Malformed registry row {row}: {reason}"
        super().__init__(message, status.HTTP_400_BAD_REQUEST, detail)


class RegistryLookupException(SpectrumException):
    """Raised when a molecule name is not in the registry"""

    def __init__(self, name: str, detail: dict = None):
        message = f"Molecule '{name}' not found in registry"
        super().__init__(message, status.HTTP_404_NOT_FOUND, detail)


class SingularityException(SpectrumException):
    """Raised when the potential denominator vanishes"""

    def __init__(self, t: float, detail: dict = None):
        message = f"Potential is singular at t = {t!r} (q = e^(2α(t−t0)))"
        super().__init__(message, status.HTTP_422_UNPROCESSABLE_ENTITY, detail)


class RealnessViolationException(SpectrumException):
    """Raised when C − A − L + 1/4 < 0"""

    def __init__(self, value: float, detail: dict = None):
        message = f"C − A − L + 1/4 = {value!r} is negative, R is not real"
        super().__init__(message, status.HTTP_422_UNPROCESSABLE_ENTITY, detail)


class ComplexZetaException(SpectrumException):
    """Raised when ζ1 would be complex (A + M > 0) or no real level exists"""

    def __init__(self, message: str, detail: dict = None):
        super().__init__(message, status.HTTP_422_UNPROCESSABLE_ENTITY, detail)


class PoleException(SpectrumException):
    """Raised when n + 1/R = 0 in the printed eigenvalue formula"""

    def __init__(self, n: int, R: float, detail: dict = None):
        message = f"Eigenvalue formula has a pole at n = {n}, R = {R!r}"
        super().__init__(message, status.HTTP_422_UNPROCESSABLE_ENTITY, detail)


class DomainException(SpectrumException):
    """Raised when an argument lies outside the open unit interval"""

    def __init__(self, name: str, detail: dict = None):
        message = f"'{name}' must lie strictly inside (0, 1)"
        super().__init__(message, status.HTTP_400_BAD_REQUEST, detail)


class DegenerateInputException(SpectrumException):
    """Raised for zero vectors and similar degenerate inputs"""

    def __init__(self, message: str, detail: dict = None):
        super().__init__(message, status.HTTP_400_BAD_REQUEST, detail)


class PreconditionException(SpectrumException):
    """Raised when a request exceeds what the grid can resolve"""

    def __init__(self, message: str, detail: dict = None):
        super().__init__(message, status.HTTP_400_BAD_REQUEST, detail)


class ReportIOException(SpectrumException):
    """Raised when report files cannot be written"""

    def __init__(self, path, reason: str, detail: dict = None):
        message = f"Cannot write report '{path}': {reason}"
        super().__init__(message, status.HTTP_500_INTERNAL_SERVER_ERROR, detail)


class NumericalException(SpectrumException):
    """Raised when a root finder or eigen-iteration does not converge"""

    exit_code = EXIT_NUMERICAL

    def __init__(self, message: str, detail: dict = None):
        super().__init__(message, status.HTTP_500_INTERNAL_SERVER_ERROR, detail)


class NoClosedFormException(NumericalException):
    """Raised when no real k turns Π into a polynomial"""

    def __init__(self, discriminant: float, detail: dict = None):
        message = f"No real k: discriminant {discriminant!r} is negative"
        super().__init__(message, detail)
        self.status_code = status.HTTP_422_UNPROCESSABLE_ENTITY


class BranchSelectionException(NumericalException):
    """Raised when no (k, Π) branch yields τ′ < 0"""

    def __init__(self, detail: dict = None):
        super().__init__("No Nikiforov-Uvarov branch with τ′ < 0", detail)
        self.status_code = status.HTTP_422_UNPROCESSABLE_ENTITY


class IntegrabilityException(NumericalException):
    """Raised when a weight or a norm integral diverges on the domain"""

    def __init__(self, message: str, detail: dict = None):
        super().__init__(message, detail)
        self.status_code = status.HTTP_422_UNPROCESSABLE_ENTITY


async def spectrum_exception_handler(request: Request, exc: SpectrumException):
    """Handle toolkit exceptions"""
    logger.error(f"{exc.__class__.__name__}: {exc.message} - Detail: {exc.detail}")
    return JSONResponse(
        status_code=exc.status_code,
        content={
            "error": True,
            "message": exc.message,
            "detail": exc.detail,
            "type": exc.__class__.__name__,
        },
    )


async def http_exception_handler(request: Request, exc: HTTPException):
    """Enhanced HTTP exception handler"""
    logger.warning(f"HTTPException: {exc.status_code} - {exc.detail}")
    return JSONResponse(
        status_code=exc.status_code,
        content={"error": True, "message": exc.detail, "status_code": exc.status_code},
    )


async def validation_exception_handler(request: Request, exc: RequestValidationError):
    """Handle validation errors with detailed information"""
    logger.warning(f"Validation error: {exc.errors()}")
    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content={
            "error": True,
            "message": "Validation error",
            "detail": exc.errors(),
            "type": "ValidationError",
        },
    )


async def general_exception_handler(request: Request, exc: Exception):
    """Handle unexpected errors"""
    logger.error(f"Unexpected error: {str(exc)}", exc_info=True)
    return JSONResponse(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        content={
            "error": True,
            "message": "An unexpected error occurred",
            "type": "InternalError",
        },
    )


def setup_exception_handlers(app):
    """Setup all exception handlers for the FastAPI app"""
    app.add_exception_handler(SpectrumException, spectrum_exception_handler)
    app.add_exception_handler(HTTPException, http_exception_handler)
    app.add_exception_handler(RequestValidationError, validation_exception_handler)
    app.add_exception_handler(Exception, general_exception_handler)
