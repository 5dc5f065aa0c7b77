# -*- coding: utf-8 -*-
#
# scaletik documentation build configuration file.

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

from scaletik.version_data import VERSION

# -- General configuration ------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx.ext.todo",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "contents"

project = "scaletik"
copyright = "2026, scaletik developers"
author = "scaletik developers"

version = VERSION
release = VERSION

language = "en"
exclude_patterns = ["_build"]

add_function_parentheses = True
add_module_names = False
pygments_style = "sphinx"
todo_include_todos = False
autoclass_content = "both"

# -- Options for HTML output ----------------------------------------------

html_theme = "sphinx_rtd_theme"
html_theme_options = {}
html_static_path = []
html_split_index = True
html_show_sourcelink = False
html_show_copyright = True
htmlhelp_basename = "scaletikdoc"

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {}
latex_documents = [
    (master_doc, "scaletik.tex", "scaletik Documentation", author, "manual")
]

man_pages = [(master_doc, "scaletik", "scaletik Documentation", [author], 1)]
