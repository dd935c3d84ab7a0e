"""Named type-projection presets.

A preset maps a name to the attribute names whose values form the type
label of a household column. Instances must carry matching
`attribute_names` for a preset to apply.
"""

PROJECTION_PRESETS: dict[str, tuple[str, ...]] = {
    # Census-shaped household projection: race counts, ethnicity, adults
    "sf1_household": (
        "white",
        "black",
        "aian",
        "asian",
        "nhpi",
        "other_race",
        "two_or_more_races",
        "hispanic",
        "adults",
    ),
    # Toy three-block example
    "example1": ("white", "black"),
    "count": ("households",),
}


def get_projection_preset(name: str) -> tuple[str, ...] | None:
    """
    Get the attribute names of a projection preset.

    Args:
        name: The preset name.

    Returns:
        The attribute names, or None if not found.
    """
    return PROJECTION_PRESETS.get(name)


def list_projection_presets() -> list[str]:
    """
    Get a list of all preset names.

    Returns:
        List of preset names.
    """
    return list(PROJECTION_PRESETS.keys())
