# Configuration file for the Sphinx documentation builder.
#
# For the full list of built-in configuration values, see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import datetime
import importlib
import os
import sys
from importlib import metadata
from pathlib import Path

# -- Project information -----------------------------------------------------

now = datetime.datetime.now()

project = "clinrisk"
copyright = str(now.year) + ", clinrisk developers"
release = metadata.version("clinrisk")
version = "Version " + release

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
    "sphinx_rtd_theme",
]

exclude_patterns = []
source_suffix = ".rst"
master_doc = "index"
autoclass_content = "init"
autodoc_member_order = "bysource"
autodoc_typehints = "both"
language = "en"

# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_rtd_theme"
html_theme_options = {"navigation_depth": -1}
add_module_names = False


def doc_title(qual_name):
    try:
        return importlib.import_module(qual_name).__doc_title__
    except (AttributeError, ModuleNotFoundError):
        return qual_name.rsplit(".", 1)[-1]


def automodule(qual_name):
    return f".. automodule:: {qual_name}\n   :members:\n   :show-inheritance:\n\n"


def write_api_reference(package_dir, doc_dir, qual_name):
    """One page per public module and an index per subpackage, titled by ``__doc_title__``."""
    modules = sorted(p for p in package_dir.glob("*.py") if not p.name.startswith("_"))
    packages = sorted(
        p for p in package_dir.iterdir() if p.is_dir() and (p / "__init__.py").exists()
    )
    os.makedirs(doc_dir, exist_ok=True)

    title = doc_title(qual_name)
    lines = f".. _{qual_name}:\n\n{title}\n{'=' * len(title)}\n\n" + automodule(qual_name)
    lines += ".. toctree::\n   :maxdepth: 1\n   :hidden:\n\n"
    lines += "".join(f"   {m.stem}\n" for m in modules)
    lines += "".join(f"   {p.name}/index\n" for p in packages)
    (doc_dir / "index.rst").write_text(lines)

    for module in modules:
        name = f"{qual_name}.{module.stem}"
        title = doc_title(name)
        (doc_dir / f"{module.stem}.rst").write_text(
            f".. _{name}:\n\n{title}\n{'=' * len(title)}\n\n" + automodule(name)
        )
    for package in packages:
        write_api_reference(package, doc_dir / package.name, f"{qual_name}.{package.name}")


sys.path.insert(0, os.path.abspath(os.path.join("..", "..", "src")))
write_api_reference(Path("../../src/clinrisk"), Path("./api_reference/"), "clinrisk")
