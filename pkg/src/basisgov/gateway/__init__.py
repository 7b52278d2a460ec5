"""Service facade, HTTP API, and CLI over the governance engine."""

from .config import GatewayConfig, load_config
from .service import GatewayService, OPERATION_SURFACE, build_app

__all__ = ["GatewayConfig", "GatewayService", "OPERATION_SURFACE", "build_app", "load_config"]
