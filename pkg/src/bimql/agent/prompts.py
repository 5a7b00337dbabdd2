"""Prompt assembly from the versioned template files."""

from __future__ import annotations

from importlib import resources

PROPERTY_NAME_LIMIT = 100


def load_template(name: str) -> str:
    return (
        resources.files("bimql.data").joinpath(f"prompts/{name}.txt").read_text()
    )


def _fill(template: str, values: dict[str, str]) -> str:
    # doubled braces in the template are literal JSON braces
    text = template.replace("{{", "\x00").replace("}}", "\x01")
    for key, value in values.items():
        text = text.replace("{" + key + "}", value)
    return text.replace("\x00", "{").replace("\x01", "}")


def render_system_prompt(
    element_types: list[str],
    graph_summary: str,
    property_names: list[str],
    user_query: str,
) -> str:
    shown = property_names[:PROPERTY_NAME_LIMIT]
    return _fill(
        load_template("system"),
        {
            "element_types": ", ".join(element_types) if element_types else "(none)",
            "graph_summary": graph_summary,
            "property_names": ", ".join(shown) if shown else "(none)",
            "user_input": user_query,
        },
    )


def render_intermediate_prompt(
    user_query: str,
    schema_summary: str,
    graph_summary: str,
    results_text: str,
) -> str:
    return _fill(
        load_template("intermediate"),
        {
            "user_input": user_query,
            "schema_summary": schema_summary,
            "graph_summary": graph_summary,
            "results": results_text,
        },
    )


def render_final_prompt(user_query: str, results_text: str) -> str:
    return _fill(
        load_template("final"),
        {"user_input": user_query, "results": results_text},
    )
