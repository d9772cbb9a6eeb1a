#!/usr/bin/env python3
"""Regenerates data/wordfreq.tsv and data/affinity.json.

The word-frequency file is a sample corpus: the five most and five least
frequent entries are fixed, the map-description vocabulary below is ranked
by hand, and the remainder is padded with common English words taken from
the `wordfreq` package (needed only to rerun this script).

    python3 tools/data/make_sample_data.py data/
"""

import json
import sys
from pathlib import Path

TILES = [
    "grass", "flowers", "bushes", "path", "sand", "rock", "fence", "post",
    "tree", "water", "house_door", "house_window", "house_roof",
    "treasure_ball", "decorative_grass_variant", "decorative_tree_variant",
]

TOP = [("with", 728), ("and", 458), ("trees", 407), ("forest", 266), ("path", 256)]
BOTTOM = ["rest", "identical", "misaligned", "blobs", "offcenter"]

# Ranked directly after the top five.
RANKED = """
a the of in river lake water grass small large village houses house on
some by sand rocks road around center middle near flowers bushes field
through town left right top bottom side fence fences beach island pond
green mountain mountains between big lots many few area two three stream
one surrounded filled full garden buildings huts hut homes home tree
woods shore coast ocean sea desert rocky rock stone stones cliff cliffs
meadow lawn plains farm pasture trail trails paths roads bridge corner
edge edges along across next row rows line lines crossing winding long
wide narrow open empty dense thick sparse scattered patch patches
cluster clusters group groups ring circle square border bordered
surrounding inside outside north south east west upper lower
flower bush shrubs hedge hedges garden gardens orchard grove jungle
woodland pine pines oak creek brook canal flooded flood swamp marsh
wetland lagoon bay harbor dock docks sandy dunes dune dry wet
boulders hill hills valley canyon cave peak ridge
cottage cabin cabins castle city settlement camp farmhouse barn
street streets square plaza courtyard yard yards
post posts gate gates wall walls pen ranch paddock
treasure gold chest chests coins loot gem gems jewel jewels
grassy leafy flowery bushy watery muddy
lone single double pair tiny huge giant little
blue brown yellow red white dark light
""".split()

AFFINITY = {
    # trees
    "forest": ({"tree": 0.75, "grass": 0.2, "flowers": 0.05}, "cluster"),
    "trees": ({"tree": 0.7, "grass": 0.2, "decorative_tree_variant": 0.1}, "cluster"),
    "tree": ({"tree": 0.5, "grass": 0.5}, "scatter"),
    "woods": ({"tree": 0.7, "bushes": 0.1, "grass": 0.2}, "cluster"),
    "woodland": ({"tree": 0.6, "bushes": 0.15, "grass": 0.25}, "cluster"),
    "jungle": ({"tree": 0.6, "bushes": 0.3, "water": 0.1}, "cluster"),
    "grove": ({"tree": 0.5, "grass": 0.4, "flowers": 0.1}, "cluster"),
    "orchard": ({"tree": 0.45, "grass": 0.35, "path": 0.2}, "scatter"),
    "pine": ({"tree": 0.55, "decorative_tree_variant": 0.15, "grass": 0.3}, "cluster"),
    "pines": ({"tree": 0.6, "decorative_tree_variant": 0.15, "grass": 0.25}, "cluster"),
    "oak": ({"tree": 0.5, "grass": 0.5}, "scatter"),
    "leafy": ({"tree": 0.4, "bushes": 0.3, "grass": 0.3}, "scatter"),
    # water
    "river": ({"water": 0.45, "grass": 0.35, "sand": 0.2}, "river"),
    "stream": ({"water": 0.35, "grass": 0.5, "flowers": 0.15}, "river"),
    "creek": ({"water": 0.35, "grass": 0.45, "bushes": 0.2}, "river"),
    "brook": ({"water": 0.3, "grass": 0.5, "flowers": 0.2}, "river"),
    "canal": ({"water": 0.4, "path": 0.3, "grass": 0.3}, "river"),
    "lake": ({"water": 0.65, "grass": 0.2, "sand": 0.15}, "cluster"),
    "pond": ({"water": 0.45, "grass": 0.4, "flowers": 0.15}, "cluster"),
    "lagoon": ({"water": 0.6, "sand": 0.4}, "cluster"),
    "water": ({"water": 0.6, "grass": 0.4}, "cluster"),
    "watery": ({"water": 0.5, "grass": 0.5}, "scatter"),
    "ocean": ({"water": 0.85, "sand": 0.15}, "border"),
    "sea": ({"water": 0.8, "sand": 0.2}, "border"),
    "bay": ({"water": 0.6, "sand": 0.4}, "border"),
    "coast": ({"water": 0.5, "sand": 0.4, "grass": 0.1}, "border"),
    "shore": ({"sand": 0.45, "water": 0.4, "grass": 0.15}, "border"),
    "flooded": ({"water": 0.7, "grass": 0.2, "sand": 0.1}, "scatter"),
    "flood": ({"water": 0.75, "grass": 0.25}, "scatter"),
    "swamp": ({"water": 0.45, "bushes": 0.3, "tree": 0.25}, "scatter"),
    "marsh": ({"water": 0.45, "grass": 0.35, "bushes": 0.2}, "scatter"),
    "wetland": ({"water": 0.4, "grass": 0.4, "flowers": 0.2}, "scatter"),
    "harbor": ({"water": 0.5, "path": 0.3, "house_roof": 0.2}, "border"),
    "blue": ({"water": 0.5, "grass": 0.5}, "scatter"),
    # sand
    "sand": ({"sand": 0.7, "grass": 0.3}, "cluster"),
    "sandy": ({"sand": 0.6, "grass": 0.4}, "scatter"),
    "beach": ({"sand": 0.6, "water": 0.3, "grass": 0.1}, "border"),
    "desert": ({"sand": 0.85, "rock": 0.1, "bushes": 0.05}, "scatter"),
    "dunes": ({"sand": 0.9, "grass": 0.1}, "cluster"),
    "dune": ({"sand": 0.8, "grass": 0.2}, "cluster"),
    "island": ({"water": 0.5, "sand": 0.3, "tree": 0.2}, "border"),
    "dry": ({"sand": 0.5, "grass": 0.5}, "scatter"),
    "yellow": ({"sand": 0.5, "flowers": 0.3, "grass": 0.2}, "scatter"),
    # rock
    "mountain": ({"rock": 0.6, "grass": 0.3, "path": 0.1}, "cluster"),
    "mountains": ({"rock": 0.7, "grass": 0.3}, "cluster"),
    "rocks": ({"rock": 0.5, "grass": 0.5}, "scatter"),
    "rock": ({"rock": 0.45, "grass": 0.55}, "cluster"),
    "rocky": ({"rock": 0.4, "grass": 0.4, "sand": 0.2}, "scatter"),
    "stone": ({"rock": 0.4, "path": 0.2, "grass": 0.4}, "scatter"),
    "stones": ({"rock": 0.35, "grass": 0.65}, "scatter"),
    "boulders": ({"rock": 0.5, "grass": 0.5}, "scatter"),
    "cliff": ({"rock": 0.6, "grass": 0.4}, "border"),
    "cliffs": ({"rock": 0.65, "grass": 0.35}, "border"),
    "hill": ({"rock": 0.3, "grass": 0.7}, "cluster"),
    "hills": ({"rock": 0.35, "grass": 0.65}, "cluster"),
    "peak": ({"rock": 0.75, "grass": 0.25}, "cluster"),
    "ridge": ({"rock": 0.6, "grass": 0.4}, "river"),
    "canyon": ({"rock": 0.55, "sand": 0.3, "path": 0.15}, "border"),
    "cave": ({"rock": 0.7, "path": 0.3}, "cluster"),
    "valley": ({"grass": 0.5, "rock": 0.3, "water": 0.2}, "border"),
    # path
    "path": ({"path": 0.4, "grass": 0.6}, "river"),
    "paths": ({"path": 0.45, "grass": 0.55}, "river"),
    "road": ({"path": 0.45, "grass": 0.55}, "river"),
    "roads": ({"path": 0.5, "grass": 0.5}, "river"),
    "trail": ({"path": 0.35, "grass": 0.5, "bushes": 0.15}, "river"),
    "trails": ({"path": 0.4, "grass": 0.45, "bushes": 0.15}, "river"),
    "street": ({"path": 0.5, "house_roof": 0.2, "grass": 0.3}, "river"),
    "streets": ({"path": 0.5, "house_roof": 0.2, "grass": 0.3}, "river"),
    "bridge": ({"path": 0.4, "water": 0.4, "grass": 0.2}, "river"),
    "crossing": ({"path": 0.5, "grass": 0.5}, "river"),
    "winding": ({"path": 0.4, "water": 0.2, "grass": 0.4}, "river"),
    "plaza": ({"path": 0.7, "flowers": 0.1, "grass": 0.2}, "cluster"),
    "courtyard": ({"path": 0.5, "house_window": 0.3, "grass": 0.2}, "cluster"),
    "muddy": ({"path": 0.4, "water": 0.2, "grass": 0.4}, "scatter"),
    "brown": ({"path": 0.5, "grass": 0.5}, "scatter"),
    # vegetation
    "flowers": ({"flowers": 0.55, "grass": 0.45}, "scatter"),
    "flower": ({"flowers": 0.4, "grass": 0.6}, "scatter"),
    "flowery": ({"flowers": 0.5, "grass": 0.5}, "scatter"),
    "garden": ({"flowers": 0.45, "bushes": 0.2, "path": 0.15, "grass": 0.2}, "cluster"),
    "gardens": ({"flowers": 0.45, "bushes": 0.25, "grass": 0.3}, "cluster"),
    "meadow": ({"grass": 0.5, "flowers": 0.4, "decorative_grass_variant": 0.1}, "scatter"),
    "red": ({"flowers": 0.5, "grass": 0.5}, "scatter"),
    "bushes": ({"bushes": 0.55, "grass": 0.45}, "scatter"),
    "bush": ({"bushes": 0.4, "grass": 0.6}, "scatter"),
    "bushy": ({"bushes": 0.5, "grass": 0.5}, "scatter"),
    "shrubs": ({"bushes": 0.5, "grass": 0.5}, "scatter"),
    "hedge": ({"bushes": 0.6, "grass": 0.4}, "border"),
    "hedges": ({"bushes": 0.6, "grass": 0.4}, "border"),
    "grass": ({"grass": 0.8, "decorative_grass_variant": 0.2}, "scatter"),
    "grassy": ({"grass": 0.7, "decorative_grass_variant": 0.3}, "scatter"),
    "green": ({"grass": 0.6, "bushes": 0.2, "tree": 0.2}, "scatter"),
    "lawn": ({"grass": 0.85, "flowers": 0.15}, "scatter"),
    "plains": ({"grass": 0.9, "decorative_grass_variant": 0.1}, "scatter"),
    "field": ({"grass": 0.7, "decorative_grass_variant": 0.2, "flowers": 0.1}, "scatter"),
    "fields": ({"grass": 0.7, "decorative_grass_variant": 0.2, "fence": 0.1}, "scatter"),
    # fences
    "fence": ({"fence": 0.35, "post": 0.15, "grass": 0.5}, "border"),
    "fences": ({"fence": 0.4, "post": 0.15, "grass": 0.45}, "border"),
    "post": ({"post": 0.3, "grass": 0.7}, "scatter"),
    "posts": ({"post": 0.35, "grass": 0.65}, "scatter"),
    "pen": ({"fence": 0.4, "grass": 0.6}, "border"),
    "gate": ({"fence": 0.3, "post": 0.2, "path": 0.2, "grass": 0.3}, "border"),
    "gates": ({"fence": 0.3, "post": 0.2, "path": 0.2, "grass": 0.3}, "border"),
    "wall": ({"fence": 0.45, "rock": 0.15, "grass": 0.4}, "border"),
    "walls": ({"fence": 0.5, "rock": 0.15, "grass": 0.35}, "border"),
    "farm": ({"grass": 0.45, "fence": 0.25, "house_roof": 0.15, "house_door": 0.05, "path": 0.1}, "border"),
    "pasture": ({"grass": 0.6, "fence": 0.3, "post": 0.1}, "border"),
    "ranch": ({"grass": 0.5, "fence": 0.3, "house_roof": 0.2}, "border"),
    "paddock": ({"grass": 0.6, "fence": 0.3, "post": 0.1}, "border"),
    "yard": ({"grass": 0.5, "fence": 0.3, "house_door": 0.2}, "border"),
    "yards": ({"grass": 0.5, "fence": 0.3, "house_door": 0.2}, "border"),
    # houses
    "village": ({"house_roof": 0.3, "house_window": 0.15, "house_door": 0.1, "path": 0.2, "grass": 0.25}, "cluster"),
    "houses": ({"house_roof": 0.35, "house_window": 0.15, "house_door": 0.1, "grass": 0.4}, "cluster"),
    "house": ({"house_roof": 0.3, "house_window": 0.1, "house_door": 0.1, "grass": 0.5}, "cluster"),
    "town": ({"house_roof": 0.3, "house_window": 0.2, "house_door": 0.1, "path": 0.25, "grass": 0.15}, "cluster"),
    "city": ({"house_roof": 0.35, "house_window": 0.25, "house_door": 0.1, "path": 0.3}, "cluster"),
    "buildings": ({"house_roof": 0.35, "house_window": 0.25, "house_door": 0.1, "path": 0.3}, "cluster"),
    "hut": ({"house_roof": 0.25, "house_door": 0.1, "grass": 0.65}, "cluster"),
    "huts": ({"house_roof": 0.3, "house_door": 0.15, "grass": 0.55}, "scatter"),
    "home": ({"house_roof": 0.3, "house_door": 0.1, "house_window": 0.1, "grass": 0.5}, "cluster"),
    "homes": ({"house_roof": 0.35, "house_door": 0.15, "house_window": 0.1, "grass": 0.4}, "cluster"),
    "cottage": ({"house_roof": 0.3, "house_window": 0.1, "house_door": 0.1, "flowers": 0.2, "grass": 0.3}, "cluster"),
    "cabin": ({"house_roof": 0.3, "house_door": 0.1, "tree": 0.3, "grass": 0.3}, "cluster"),
    "cabins": ({"house_roof": 0.35, "house_door": 0.1, "tree": 0.25, "grass": 0.3}, "scatter"),
    "castle": ({"house_window": 0.35, "house_roof": 0.25, "fence": 0.2, "path": 0.2}, "cluster"),
    "settlement": ({"house_roof": 0.3, "house_door": 0.1, "path": 0.25, "grass": 0.35}, "scatter"),
    "camp": ({"house_roof": 0.25, "path": 0.25, "grass": 0.5}, "scatter"),
    "farmhouse": ({"house_roof": 0.3, "house_door": 0.1, "fence": 0.2, "grass": 0.4}, "cluster"),
    "barn": ({"house_roof": 0.35, "house_door": 0.1, "fence": 0.15, "grass": 0.4}, "cluster"),
    "dock": ({"path": 0.4, "water": 0.4, "house_roof": 0.2}, "border"),
    "docks": ({"path": 0.4, "water": 0.4, "house_roof": 0.2}, "border"),
    # treasure
    "treasure": ({"treasure_ball": 0.06, "grass": 0.74, "flowers": 0.2}, "scatter"),
    "gold": ({"treasure_ball": 0.04, "sand": 0.5, "grass": 0.46}, "scatter"),
    "chest": ({"treasure_ball": 0.05, "grass": 0.75, "path": 0.2}, "scatter"),
    "chests": ({"treasure_ball": 0.06, "grass": 0.74, "path": 0.2}, "scatter"),
    "coins": ({"treasure_ball": 0.04, "grass": 0.96}, "scatter"),
    "loot": ({"treasure_ball": 0.05, "grass": 0.75, "rock": 0.2}, "scatter"),
    "gem": ({"treasure_ball": 0.03, "rock": 0.4, "grass": 0.57}, "scatter"),
    "gems": ({"treasure_ball": 0.04, "rock": 0.4, "grass": 0.56}, "scatter"),
    "jewel": ({"treasure_ball": 0.03, "grass": 0.97}, "scatter"),
    "jewels": ({"treasure_ball": 0.04, "grass": 0.96}, "scatter"),
    # mood words
    "dark": ({"tree": 0.4, "rock": 0.3, "grass": 0.3}, "scatter"),
    "white": ({"sand": 0.4, "rock": 0.3, "grass": 0.3}, "scatter"),
    "light": ({"grass": 0.6, "flowers": 0.2, "sand": 0.2}, "scatter"),
    "dense": ({"tree": 0.5, "bushes": 0.3, "grass": 0.2}, "cluster"),
    "thick": ({"tree": 0.45, "bushes": 0.35, "grass": 0.2}, "cluster"),
    "wet": ({"water": 0.35, "grass": 0.65}, "scatter"),
}

EXCLUDED_FILLERS = {"sex", "fuck", "shit", "porn", "gay", "nude", "sexy", "fucking", "dick", "ass", "bitch", "damn", "hell", "kill", "killed", "death", "dead", "drug", "drugs", "gun", "guns", "war", "sexual", "rape", "naked", "penis", "vagina"}


def build_vocabulary():
    words = [w for w, _ in TOP]
    seen = set(words) | set(BOTTOM)
    for w in RANKED:
        if w not in seen:
            words.append(w)
            seen.add(w)
    for w in AFFINITY:
        if w not in seen:
            words.append(w)
            seen.add(w)

    from wordfreq import top_n_list

    for w in top_n_list("en", 5000):
        if len(words) >= 995:
            break
        if w in seen or w in EXCLUDED_FILLERS:
            continue
        if len(w) < 2 or not w.isascii() or not w.isalpha() or not w.islower():
            continue
        words.append(w)
        seen.add(w)
    assert len(words) == 995, len(words)
    return words


def main(out_dir):
    out = Path(out_dir)
    words = build_vocabulary()

    lines = [f"{w}\t{c}" for w, c in TOP]
    for rank, w in enumerate(words[5:], start=6):
        count = max(2, round(255 * (6 / rank) ** 0.9))
        lines.append(f"{w}\t{count}")
    lines += [f"{w}\t1" for w in BOTTOM]
    (out / "wordfreq.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    index = {name: i for i, name in enumerate(TILES)}
    table = {}
    for word, (weights, hint) in sorted(AFFINITY.items()):
        vec = [0.0] * 16
        for name, w in weights.items():
            vec[index[name]] = w
        table[word] = {"weights": vec, "hint": hint}
    doc = {"tiles": TILES, "words": table}
    (out / "affinity.json").write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data")
