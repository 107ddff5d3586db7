"""
SirsNet - Interface en ligne de commande
"""

from .cli import app, cli_main, dispatch

__all__ = ['app', 'cli_main', 'dispatch']
