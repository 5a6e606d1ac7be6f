# -*- coding: utf-8 -*-
#
# Sphinx configuration for the povmforge documentation.

import os
import sys

cwd = os.getcwd()
parent = os.path.dirname(cwd)
sys.path.append(parent)

import povmforge  # noqa: E402

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.viewcode']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'POVM Forge'
copyright = u'2026, POVM Forge contributors'

version = povmforge.__version__
release = povmforge.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'default'
html_static_path = ['_static']
htmlhelp_basename = 'povmforgedoc'

latex_documents = [
    ('index', 'povmforge.tex', u'POVM Forge Documentation', u'POVM Forge contributors', 'manual'),
]

man_pages = [
    ('index', 'povmforge', u'POVM Forge Documentation', [u'POVM Forge contributors'], 1),
]

texinfo_documents = [
    ('index', 'povmforge', u'POVM Forge Documentation', u'POVM Forge contributors', 'povmforge',
     'Naimark dilation and circuit synthesis of a five-outcome POVM.', 'Miscellaneous'),
]
