# svg.py
# -----------------------------------------------------------------------------
# SVG shell and chart templates for a consistent look across plot kinds:
#  - _base_css(): shared styles embedded in every document
#  - render_chart(): axes frame + one body template per plot kind
# Numbers reaching the templates are pre-formatted strings, so output is
# byte-identical for identical input.
# -----------------------------------------------------------------------------

from __future__ import annotations

from typing import Any, Dict

from jinja2 import DictLoader, Environment, StrictUndefined, select_autoescape

WIDTH = 720
HEIGHT = 440
MARGIN = {"left": 70, "right": 150, "top": 40, "bottom": 55}
PALETTE = ("#2563eb", "#dc2626", "#16a34a", "#9333ea", "#ea580c", "#0891b2", "#4b5563", "#ca8a04")


def _base_css() -> str:
    return """
    text { font: 12px system-ui, Segoe UI, Roboto, Arial, sans-serif; fill: #111; }
    .title { font-size: 15px; font-weight: 700; }
    .axis { stroke: #111; stroke-width: 1; }
    .tick { stroke: #9ca3af; stroke-width: 0.5; }
    .muted { fill: #6b7280; }
    .impulse { stroke: #111; stroke-width: 1; stroke-dasharray: 4 3; }
    .series { fill: none; stroke-width: 1.6; }
    """


_FRAME = """<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{{ width }}" height="{{ height }}" viewBox="0 0 {{ width }} {{ height }}">
<style>{{ css }}</style>
<rect x="0" y="0" width="{{ width }}" height="{{ height }}" fill="#ffffff"/>
<text class="title" x="{{ left }}" y="24">{{ title }}</text>
{% for t in x_ticks %}<line class="tick" x1="{{ t.pos }}" y1="{{ top }}" x2="{{ t.pos }}" y2="{{ bottom }}"/>
<text x="{{ t.pos }}" y="{{ bottom_label }}" text-anchor="middle">{{ t.label }}</text>
{% endfor %}{% for t in y_ticks %}<line class="tick" x1="{{ left }}" y1="{{ t.pos }}" x2="{{ right }}" y2="{{ t.pos }}"/>
<text x="{{ left_label }}" y="{{ t.pos }}" text-anchor="end" dominant-baseline="middle">{{ t.label }}</text>
{% endfor %}{% block body %}{% endblock %}
<line class="axis" x1="{{ left }}" y1="{{ bottom }}" x2="{{ right }}" y2="{{ bottom }}"/>
<line class="axis" x1="{{ left }}" y1="{{ top }}" x2="{{ left }}" y2="{{ bottom }}"/>
<text x="{{ x_mid }}" y="{{ height - 12 }}" text-anchor="middle">{{ x_label }}</text>
<text x="16" y="{{ y_mid }}" text-anchor="middle" transform="rotate(-90 16 {{ y_mid }})">{{ y_label }}</text>
{% for item in legend %}<rect x="{{ legend_x }}" y="{{ item.y }}" width="12" height="12" fill="{{ item.color }}"/>
<text x="{{ legend_x + 18 }}" y="{{ item.y + 10 }}">{{ item.label }}</text>
{% endfor %}</svg>
"""

_HEATMAP = """{% extends "frame" %}{% block body %}{% for c in cells %}<rect x="{{ c.x }}" y="{{ c.y }}" width="{{ c.w }}" height="{{ c.h }}" fill="{{ c.fill }}"/>
{% endfor %}{% for m in markers %}<line class="impulse" x1="{{ m }}" y1="{{ top }}" x2="{{ m }}" y2="{{ bottom }}"/>
{% endfor %}{% endblock %}"""

_CURVES = """{% extends "frame" %}{% block body %}{% for s in series %}{% if s.points|length > 1 %}<polyline class="series" stroke="{{ s.color }}" points="{{ s.points|join(' ') }}"/>
{% endif %}{% for p in s.markers %}<circle cx="{{ p.x }}" cy="{{ p.y }}" r="3" fill="{{ s.color }}"/>
{% endfor %}{% endfor %}{% for m in markers %}<line class="impulse" x1="{{ m }}" y1="{{ top }}" x2="{{ m }}" y2="{{ bottom }}"/>
{% endfor %}{% endblock %}"""

_BARS = """{% extends "frame" %}{% block body %}{% for b in bars %}<rect x="{{ b.x }}" y="{{ b.y }}" width="{{ b.w }}" height="{{ b.h }}" fill="{{ b.color }}" fill-opacity="{{ b.opacity }}"/>
{% endfor %}{% endblock %}"""

_env = Environment(
    loader=DictLoader({"frame": _FRAME, "heatmap": _HEATMAP, "curves": _CURVES, "bars": _BARS}),
    autoescape=select_autoescape(default=True, default_for_string=True),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
)


def frame_context() -> Dict[str, Any]:
    """Geometry shared by every chart."""
    left, top = MARGIN["left"], MARGIN["top"]
    right, bottom = WIDTH - MARGIN["right"], HEIGHT - MARGIN["bottom"]
    return {
        "width": WIDTH, "height": HEIGHT, "css": _base_css(),
        "left": left, "right": right, "top": top, "bottom": bottom,
        "bottom_label": bottom + 18, "left_label": left - 6,
        "x_mid": (left + right) // 2, "y_mid": (top + bottom) // 2,
        "legend_x": right + 16,
    }


def render_chart(template: str, **context: Any) -> str:
    """Render one chart body inside the shared frame."""
    ctx = frame_context()
    ctx.update(context)
    return _env.get_template(template).render(**ctx)
