"""Rendering of planar regions."""

from feasregion.render.svg import clip_row, observation_viewport, render_region_svg, write_svg

__all__ = ["clip_row", "observation_viewport", "render_region_svg", "write_svg"]
