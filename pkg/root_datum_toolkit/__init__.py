__all__ = ["datum"]
