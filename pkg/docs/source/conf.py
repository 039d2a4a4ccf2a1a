# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
#
# This file does only contain a selection of the most common options. For a
# full list see the documentation:
# http://www.sphinx-doc.org/en/stable/config

# -- Path setup --------------------------------------------------------------

import os
import sys

root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..'))
sys.path.insert(0, root)

import datetime
import cbspart

# -- Project information -----------------------------------------------------

project = 'cbspart'
copyright = (str(datetime.date.today().year) + ' The cbspart developers')
author = 'The cbspart developers'

# The short X.Y version
version = cbspart.__version__
# The full version, including alpha/beta/rc tags
release = version


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'numpydoc',
    'sphinx.ext.intersphinx',
    'sphinx_copybutton',
    'sphinx.ext.todo',
    'sphinx.ext.viewcode',
    'sphinx.ext.mathjax',
]

# Add any paths that contain templates here, relative to this directory.
templates_path = ['.templates']

source_suffix = '.rst'

# The master toctree document.
master_doc = 'index'

language = 'en'

exclude_patterns = []

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = 'sphinx'


# -- Options for HTML output -------------------------------------------------

html_theme = 'nature'

html_static_path = ['.static']

html_sidebars = {'**': ['globaltoc.html', 'relations.html', 'sourcelink.html', 'searchbox.html']}


# -- Options for HTMLHelp output ---------------------------------------------

htmlhelp_basename = 'cbspartdoc'


# -- Options for LaTeX output ------------------------------------------------

latex_elements = {}

latex_documents = [
    (master_doc, 'cbspart.tex', 'cbspart Documentation',
     author, 'manual'),
]


# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'cbspart', 'cbspart Documentation',
     [author], 1)
]


# -- Options for Texinfo output ----------------------------------------------

texinfo_documents = [
    (master_doc, 'cbspart', 'cbspart Documentation',
     author, 'cbspart', 'Coefficient-based spectral partitioning for '
     'additive Schwarz preconditioning.',
     'Miscellaneous'),
]


# -- Extension configuration -------------------------------------------------

# -- Options for autodoc extension ---------------------------------------

# generate rst of member functions on the fly
autosummary_generate = True
autodata_content = 'both'

# -- Options for numpydoc extension ---------------------------------------

numpydoc_show_class_members = True
numpydoc_show_inherited_class_members = False
numpydoc_class_members_toctree = False

# -- Options for intersphinx extension ---------------------------------------

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'pandas': ('https://pandas.pydata.org/docs/', None),
}

# -- Options for todo extension ----------------------------------------------

todo_include_todos = True

# -- Options for sphinx copybutton--------------------------------------------

copybutton_prompt_text = ">>> "
