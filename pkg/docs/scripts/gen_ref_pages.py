"""Generate the API reference pages of the satcn package."""

from pathlib import Path

import mkdocs_gen_files

nav = mkdocs_gen_files.Nav()

for path in sorted(Path("src", "satcn").rglob("*.py")):
    parts = list(path.relative_to("src").with_suffix("").parts)
    if parts[-1] == "__init__":
        parts = parts[:-1]
    doc_path = Path(*parts, "index.md")
    nav[parts] = doc_path.as_posix()

    with mkdocs_gen_files.open(Path("reference", doc_path), "w") as fd:
        print("::: " + ".".join(parts), file=fd)
    mkdocs_gen_files.set_edit_path(Path("reference", doc_path), path)

with mkdocs_gen_files.open("reference/SUMMARY.md", "w") as nav_file:
    nav_file.writelines(nav.build_literate_nav())
