import datetime

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "reviewcues"
year = datetime.datetime.now().strftime("%Y")
copyright = f"{year}, The reviewcues team"

version = "1.0"
release = "1.0"
exclude_patterns = ["_build"]
pygments_style = "sphinx"
extensions = ["myst_parser", "sphinx.ext.autosectionlabel"]

myst_enable_extensions = [
    "colon_fence",
]
autosectionlabel_prefix_document = True
