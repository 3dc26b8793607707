from .engine import ToolkitEngine

__all__ = ["ToolkitEngine"]
