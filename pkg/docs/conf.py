#!/usr/bin/env python
# geomech documentation build configuration file
import os
import sys

sys.path.insert(0, os.path.abspath(".."))

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "geomech"
version = "0.1.0"
release = "0.1.0"

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = "sphinx"

html_theme = "sphinx_rtd_theme"
htmlhelp_basename = "geomechdoc"

autodoc_typehints = "description"
