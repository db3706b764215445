"""
Generator package for creating table-reproduction reports.

This package assembles a DOCX report from the comparison rows of a
reproduced energy table.  It uses python‑docx to build the document.

Module contents:

* ``docx_generator.py`` – the main interface for generating reports.
"""

from .docx_generator import generate_table_report  # noqa: F401
