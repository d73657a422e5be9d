from schurian.services.exactalg import exact_algebra_service
from schurian.services.category_service import category_service
from schurian.services.cw_service import cw_service
from schurian.services.presentation_service import presentation_service
from schurian.services.grading_service import grading_service
from schurian.services.hochschild_service import hochschild_service

__all__ = [
    "exact_algebra_service",
    "category_service",
    "cw_service",
    "presentation_service",
    "grading_service",
    "hochschild_service",
]
