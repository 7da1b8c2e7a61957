"""
Frontlab - Visualization Package
Report writers (JSON, CSV, PGM) and optional matplotlib figures.
"""

from .outputs import write_json, write_csv, write_pgm, read_pgm, field_to_image, to_serializable

__all__ = [
    'write_json',
    'write_csv',
    'write_pgm',
    'read_pgm',
    'field_to_image',
    'to_serializable',
]
