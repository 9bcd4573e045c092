"""Serialization of decompositions, jet fields and reports, plus SVG
rendering of planar decompositions and cube chains.

All JSON output is written with sorted keys and a fixed layout so that a
rerun with the same inputs is byte-identical.
"""

import json
from fractions import Fraction

import numpy as np

from .geometry import DyadicCube
from .jets import Jet
from .multiindex import mi_from_key, mi_to_key
from .params import SpaceParams


def dump_json(obj, path):
    text = json.dumps(obj, sort_keys=True, indent=2)
    with open(path, "w") as fh:
        fh.write(text + "\n")


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def point_to_json(pt):
    return [str(Fraction(c)) for c in pt]


def point_from_json(lst):
    return tuple(Fraction(s) for s in lst)


def decomposition_to_json(W):
    anchors = {}
    for cube in W.cubes():
        anchors[cube.key()] = point_to_json(W.anchor(cube))
    return {
        "params": W.params.to_json(),
        "domain_exp": W.domain_exp,
        "max_level": W.max_level,
        "sites": [point_to_json(s) for s in W.sites],
        "cubes": sorted(c.key() for c in W.cubes()),
        "anchors": anchors,
        "fringe": sorted(c.key() for c in W.fringe_cubes()),
    }


def decomposition_from_json(data):
    """Rebuild a decomposition object from its serialized cube lists."""
    from .decomposition import WhitneyDecomposition

    params = SpaceParams.from_json(data["params"])
    sites = [point_from_json(s) for s in data["sites"]]
    by_level = {}
    for key in data["cubes"]:
        c = DyadicCube.from_key(key)
        by_level.setdefault(c.level, []).append(c.coords)
    levels = {m: np.array(sorted(rows), dtype=np.int64)
              for m, rows in by_level.items()}
    fringe_rows = sorted(DyadicCube.from_key(k).coords for k in data["fringe"])
    n = params.n
    fringe = (np.array(fringe_rows, dtype=np.int64).reshape(-1, n)
              if fringe_rows else np.empty((0, n), dtype=np.int64))
    return WhitneyDecomposition(params, sites, data["domain_exp"],
                                data["max_level"], levels, fringe)


def save_decomposition(W, path):
    dump_json(decomposition_to_json(W), path)


def load_decomposition(path):
    return decomposition_from_json(load_json(path))


def jetfield_to_json(jf):
    jets = []
    for site in sorted(jf.entries):
        jet = jf.entries[site]
        jets.append({"anchor": point_to_json(site), "order": jet.order,
                     "coeffs": {mi_to_key(k): v
                                for k, v in sorted(jet.coeffs.items())}})
    return {"params": jf.params.to_json(), "jets": jets}


def jetfield_from_json(data):
    from .extension import JetField

    params = SpaceParams.from_json(data["params"])
    entries = {}
    for item in data["jets"]:
        site = point_from_json(item["anchor"])
        coeffs = {mi_from_key(k): float(v)
                  for k, v in item["coeffs"].items()}
        entries[site] = Jet(site, item["order"], coeffs)
    return JetField(params, entries)


def save_jetfield(jf, path):
    dump_json(jetfield_to_json(jf), path)


def load_jetfield(path):
    return jetfield_from_json(load_json(path))


# -- SVG rendering (planar only) -------------------------------------------

_SVG_HEAD = ('<svg xmlns="http://www.w3.org/2000/svg" '
             'viewBox="{x} {y} {w} {h}" width="800" height="800">\n')


def _tx(W, size=1000.0):
    half = float(2 ** W.domain_exp)

    def f(pt):
        return ((float(pt[0]) + half) / (2 * half) * size,
                (half - float(pt[1])) / (2 * half) * size)
    return f


def render_decomposition_svg(W, path):
    """Cubes as rectangles, sites as dots, cube-to-anchor arrows (n = 2)."""
    if W.n != 2:
        raise ValueError("SVG rendering needs n = 2")
    size = 1000.0
    f = _tx(W, size)
    out = [_SVG_HEAD.format(x=0, y=0, w=size, h=size)]
    out.append(f'<rect x="0" y="0" width="{size}" height="{size}" '
               'fill="white" stroke="black"/>\n')
    for cube in W.cubes():
        b = cube.box()
        x0, y1 = f((b.lo[0], b.lo[1]))
        x1, y0 = f((b.hi[0], b.hi[1]))
        out.append(f'<rect x="{x0:.3f}" y="{y0:.3f}" width="{x1 - x0:.3f}" '
                   f'height="{y1 - y0:.3f}" fill="none" stroke="#3366aa" '
                   'stroke-width="0.5"/>\n')
        cx, cy = f(cube.center())
        ax, ay = f(W.anchor(cube))
        out.append(f'<line x1="{cx:.3f}" y1="{cy:.3f}" x2="{ax:.3f}" '
                   f'y2="{ay:.3f}" stroke="#cccccc" stroke-width="0.3"/>\n')
    for cube in W.fringe_cubes():
        b = cube.box()
        x0, y1 = f((b.lo[0], b.lo[1]))
        x1, y0 = f((b.hi[0], b.hi[1]))
        out.append(f'<rect x="{x0:.3f}" y="{y0:.3f}" width="{x1 - x0:.3f}" '
                   f'height="{y1 - y0:.3f}" fill="#ffdddd" stroke="none"/>\n')
    for site in W.sites:
        sx, sy = f(site)
        out.append(f'<circle cx="{sx:.3f}" cy="{sy:.3f}" r="3" '
                   'fill="#cc2222"/>\n')
    out.append("</svg>\n")
    with open(path, "w") as fh:
        fh.writelines(out)


def render_paths_svg(W, paths, path):
    """Segments plus their cube chains over the decomposition (n = 2)."""
    if W.n != 2:
        raise ValueError("SVG rendering needs n = 2")
    size = 1000.0
    f = _tx(W, size)
    out = [_SVG_HEAD.format(x=0, y=0, w=size, h=size)]
    out.append(f'<rect x="0" y="0" width="{size}" height="{size}" '
               'fill="white" stroke="black"/>\n')
    for cube in W.cubes():
        b = cube.box()
        x0, y1 = f((b.lo[0], b.lo[1]))
        x1, y0 = f((b.hi[0], b.hi[1]))
        out.append(f'<rect x="{x0:.3f}" y="{y0:.3f}" width="{x1 - x0:.3f}" '
                   f'height="{y1 - y0:.3f}" fill="none" stroke="#dddddd" '
                   'stroke-width="0.4"/>\n')
    for p in paths:
        for cube in p.cubes:
            b = cube.box()
            x0, y1 = f((b.lo[0], b.lo[1]))
            x1, y0 = f((b.hi[0], b.hi[1]))
            out.append(f'<rect x="{x0:.3f}" y="{y0:.3f}" '
                       f'width="{x1 - x0:.3f}" height="{y1 - y0:.3f}" '
                       'fill="#88cc8844" stroke="#338833" '
                       'stroke-width="0.6"/>\n')
        ox, oy = f(p.origin)
        tx_, ty_ = f(p.target)
        out.append(f'<line x1="{ox:.3f}" y1="{oy:.3f}" x2="{tx_:.3f}" '
                   f'y2="{ty_:.3f}" stroke="#aa3333" stroke-width="1.2"/>\n')
        out.append(f'<circle cx="{ox:.3f}" cy="{oy:.3f}" r="2.5" '
                   'fill="#aa3333"/>\n')
    for site in W.sites:
        sx, sy = f(site)
        out.append(f'<circle cx="{sx:.3f}" cy="{sy:.3f}" r="3" '
                   'fill="#cc2222"/>\n')
    out.append("</svg>\n")
    with open(path, "w") as fh:
        fh.writelines(out)
