"""SVG drawings of shapes and HTML reports of derivations."""

from __future__ import annotations

import html
import json
import os
import re
from dataclasses import dataclass

from .rules import Derivation, DerivationStep, derivation_to_dict
from .shapes import Shape, subshape

PX = 400.0


@dataclass(frozen=True)
class RenderSpec:
    viewport: tuple[float, float, float, float] | None = None  # (xmin, ymin, xmax, ymax)
    stroke_width: float = 2.0
    highlight: Shape | None = None


def fit_viewport(*shapes: Shape) -> tuple[float, float, float, float]:
    """Bounding box of all shapes widened by a 5% margin."""
    boxes = [b for s in shapes if (b := s.bounds()) is not None]
    if not boxes:
        return (0.0, 0.0, 1.0, 1.0)
    x0 = min(b[0] for b in boxes)
    y0 = min(b[1] for b in boxes)
    x1 = max(b[2] for b in boxes)
    y1 = max(b[3] for b in boxes)
    size = max(x1 - x0, y1 - y0) or 1.0
    m = 0.05 * size
    return (x0 - m, y0 - m, x1 + m, y1 + m)


def _f(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _body(shape: Shape, vp, spec: RenderSpec, ox: float = 0.0) -> list[str]:
    x0, y0, x1, y1 = vp
    k = PX / max(x1 - x0, y1 - y0)

    def X(x):
        return _f(ox + (x - x0) * k)

    def Y(y):
        return _f((y1 - y) * k)

    out = ['<g class="drawing" fill="none" stroke="black">']
    for s in shape.segments:
        hot = spec.highlight is not None and subshape(Shape([s]), spec.highlight)
        style = f' stroke="#c0392b" stroke-width="{_f(spec.stroke_width * 1.5)}"' if hot else f' stroke-width="{_f(spec.stroke_width)}"'
        out.append(f'<path d="M {X(s.p.x)} {Y(s.p.y)} L {X(s.q.x)} {Y(s.q.y)}"{style}/>')
    r = _f(0.02 * PX)
    for lp in shape.labels:
        out.append(f'<circle cx="{X(lp.at.x)}" cy="{Y(lp.at.y)}" r="{r}" fill="black" stroke="none"><title>{html.escape(lp.label)}</title></circle>')
    out.append("</g>")
    return out


def _doc(width: float, height: float, body: list[str]) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def shape_svg(shape: Shape, spec: RenderSpec | None = None) -> str:
    spec = spec or RenderSpec()
    vp = spec.viewport or fit_viewport(shape)
    k = PX / max(vp[2] - vp[0], vp[3] - vp[1])
    return _doc((vp[2] - vp[0]) * k, (vp[3] - vp[1]) * k, _body(shape, vp, spec))


def step_svg(st: DerivationStep) -> str:
    """Before/after panels on a shared viewport; t(lhs) and t(rhs) highlighted."""
    vp = fit_viewport(st.shape_before, st.shape_after)
    k = PX / max(vp[2] - vp[0], vp[3] - vp[1])
    w, h = (vp[2] - vp[0]) * k, (vp[3] - vp[1]) * k
    gap = 0.1 * PX
    body = _body(st.shape_before, vp, RenderSpec(highlight=st.matched))
    body += _body(st.shape_after, vp, RenderSpec(highlight=st.placed), ox=w + gap)
    arrow_y = _f(h / 2)
    body.append(f'<path d="M {_f(w + gap * 0.2)} {arrow_y} L {_f(w + gap * 0.8)} {arrow_y}" stroke="gray" stroke-width="2"/>')
    return _doc(2 * w + gap, h, body)


_REF = re.compile(r"<(shape[12])>")


def _sentence_html(text: str, refs: dict[str, str]) -> str:
    parts = []
    pos = 0
    for m in _REF.finditer(text):
        parts.append(html.escape(text[pos:m.start()]))
        name = m.group(1)
        parts.append(f'<img class="ref" src="{refs[name]}" alt="{name}" height="48">')
        pos = m.end()
    parts.append(html.escape(text[pos:]))
    return "".join(parts)


def write_report(d: Derivation, out_dir) -> list[str]:
    """Write trace.json, per-step SVGs and index.html; return written file names."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def put(name: str, text: str):
        with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        written.append(name)

    put("trace.json", json.dumps(derivation_to_dict(d), indent=2, sort_keys=True) + "\n")
    put("initial.svg", shape_svg(d.initial))
    rows = [
        "<!DOCTYPE html>",
        '<html><head><meta charset="utf-8"><title>Derivation report</title>',
        "<style>body{font-family:sans-serif} img.ref{vertical-align:middle;border:1px solid #ccc}"
        " .verified{color:#1e8449} .refuted{color:#c0392b} .unverifiable{color:#7f8c8d}</style>",
        "</head><body>",
        "<h1>Derivation report</h1>",
        '<p>Initial shape:</p><img src="initial.svg" alt="initial shape" height="160">',
    ]
    for st in d.steps:
        stem = f"step_{st.index:03d}"
        put(f"{stem}.svg", step_svg(st))
        refs = {}
        for name, shape in sorted(st.binding.items()):
            refs[name] = f"{stem}_{name}.svg"
            put(refs[name], shape_svg(shape, RenderSpec(viewport=fit_viewport(st.shape_after))))
        rows.append(f"<h2>Step {st.index}: rule {html.escape(st.rule)}</h2>")
        rows.append(f'<img src="{stem}.svg" alt="step {st.index}" height="160">')
        rows.append("<ul>")
        for desc in st.descriptions:
            v = desc.verification
            verdict = v.status + (f" ({v.relation.value})" if v.relation else "") + (", coarse" if v.coarse else "")
            rows.append(
                f'<li>{_sentence_html(desc.text, refs)} <span class="{v.status}">[{html.escape(verdict)}]</span></li>'
            )
        rows.append("</ul>")
    rows.append(f"<p>Termination: {html.escape(d.termination)}</p>")
    rows.append("</body></html>")
    put("index.html", "\n".join(rows) + "\n")
    return written
