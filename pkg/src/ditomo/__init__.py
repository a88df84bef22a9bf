"""Device-independent self-testing toolkit for multipartite quantum states."""

__version__ = "0.1.0"
