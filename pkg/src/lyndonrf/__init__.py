"""Random Lyndon words and the length of their standard right factor."""

__version__ = "0.1.0"
