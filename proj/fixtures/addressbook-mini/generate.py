#!/usr/bin/env python3
# Copyright 2026 The Fragscope Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the addressbook-mini app definitions and snapshot fixtures."""

import copy
import csv
import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))

WHITE = [255, 255, 255]
HEADER = [40, 60, 120]
NAV = [150, 150, 170]
LINK = [60, 120, 60]
FORM = [120, 90, 60]
TOOLS = [90, 110, 70]
FIELD = [180, 180, 120]
BUTTON = [60, 60, 140]
TABLE = [100, 140, 160]
ROW = [170, 190, 120]
CELL = [190, 170, 110]
CHECK = [70, 70, 70]

NAV_LIST = "/html[1]/body[1]/div[2]/a[1]"
NAV_NEW = "/html[1]/body[1]/div[2]/a[2]"
THIRD_BUTTON = "/html[1]/body[1]/div[3]/button[1]"

ENTRIES = [
    {"first": "Ada", "last": "Lovelace", "phone": "555-0101"},
    {"first": "Grace", "last": "Hopper", "phone": "555-0199"},
]
OTHER = [
    {"first": "Edsger", "last": "Dijkstra", "phone": "555-7310"},
    {"first": "Alan", "last": "Turing", "phone": "555-2468"},
]

PEOPLE = {
    "first": ["Ada", "Grace", "Alan", "Edsger", "Barbara", "Donald", "Frances", "John", "Radia",
              "Ken", "Margaret", "Niklaus", "Leslie", "Tony", "Shafi", "Kristen"],
    "last": ["Lovelace", "Hopper", "Turing", "Dijkstra", "Liskov", "Knuth", "Allen", "Backus",
             "Perlman", "Thompson", "Hamilton", "Wirth", "Lamport", "Hoare", "Goldwasser", "Nygaard"],
    "phonePrefix": "555-",
}


def node(i, tag, bbox, fill, children=(), text=None, attrs=None):
    n = {"id": i, "tag": tag, "bbox": bbox, "fill": fill, "children": list(children)}
    if text is not None:
        n["text"] = text
    if attrs:
        n["attrs"] = attrs
    return n


FUNCTIONAL_ROW = {
    "root": 0,
    "nodes": [
        node(0, "tr", [0, 0, 1024, 16], ROW, [1, 3, 4, 5]),
        node(1, "td", [8, 0, 24, 16], CELL, [2]),
        node(2, "input", [12, 2, 12, 12], CHECK, attrs={"type": "checkbox"}),
        node(3, "td", [40, 0, 200, 16], CELL, text="{first}"),
        node(4, "td", [248, 0, 200, 16], CELL, text="{last}"),
        node(5, "td", [456, 0, 200, 16], CELL, text="{phone}"),
    ],
}

PLAIN_ROW = {
    "root": 0,
    "nodes": [
        node(0, "tr", [0, 0, 1024, 16], ROW, [1, 2, 3]),
        node(1, "td", [8, 0, 232, 16], CELL, text="{first}"),
        node(2, "td", [248, 0, 200, 16], CELL, text="{last}"),
        node(3, "td", [456, 0, 200, 16], CELL, text="{phone}"),
    ],
}


def page(middle, row_template, with_new=True):
    nav_children = [7, 8] if with_new else [7]
    nodes = [
        node(0, "html", [0, 0, 1024, 768], WHITE, [1]),
        node(1, "body", [0, 0, 1024, 768], WHITE, [2, 6, 9, 13]),
        node(2, "div", [0, 0, 1024, 64], HEADER, [3, 4], attrs={"id": "header"}),
        node(3, "h1", [16, 8, 400, 28], HEADER, text="Address Book"),
        node(4, "p", [16, 40, 400, 16], HEADER, text="user: admin"),
        node(6, "div", [0, 76, 1024, 36], NAV, nav_children, attrs={"id": "nav"}),
        node(7, "a", [16, 80, 80, 28], LINK, text="List", attrs={"href": "#/list"}),
    ]
    if with_new:
        nodes.append(node(8, "a", [104, 80, 80, 28], LINK, text="New", attrs={"href": "#/new"}))
    if middle == "form":
        nodes += [
            node(9, "div", [0, 124, 1024, 64], FORM, [10, 11, 12], attrs={"id": "form"}),
            node(10, "input", [16, 140, 200, 28], FIELD, attrs={"type": "text", "name": "name"}),
            node(11, "input", [232, 140, 200, 28], FIELD, attrs={"type": "text", "name": "phone"}),
            node(12, "button", [448, 140, 80, 28], BUTTON, text="add"),
        ]
    else:
        nodes += [
            node(9, "div", [0, 124, 1024, 64], TOOLS, [10, 11], attrs={"id": "tools"}),
            node(10, "button", [16, 140, 96, 28], BUTTON, text="Refresh"),
            node(11, "span", [128, 140, 200, 28], TOOLS, text="{count} entries"),
        ]
    nodes.append(node(13, "table", [0, 200, 1024, 0], TABLE, attrs={"id": "entries"}))
    return {
        "root": 0,
        "nodes": nodes,
        "rows": {"parent": 13, "template": row_template, "origin": [0, 200], "pitch": 28},
    }


def app(variant=False):
    with_new = not variant
    entries = copy.deepcopy(ENTRIES)
    if variant:
        entries.append(copy.deepcopy(entries[-1]))
    pages = {
        "home": page("form", "plain", with_new),
        "list": page("tools", "functional", with_new),
        "new": page("form", "functional", with_new),
    }
    transitions = []
    for p in pages:
        transitions.append({"from": p, "locator": NAV_LIST, "effect": {"goto": "list"}})
        if with_new:
            transitions.append({"from": p, "locator": NAV_NEW, "effect": {"goto": "new"}})
    transitions.append({"from": "home", "locator": THIRD_BUTTON, "effect": {"addRow": "people"}})
    transitions.append({"from": "new", "locator": THIRD_BUTTON, "effect": {"addRow": "people"}})
    transitions.append({"from": "list", "locator": THIRD_BUTTON, "effect": {"mutateData": "people"}})
    return {
        "name": "addressbook-mini" + ("-variant" if variant else ""),
        "baseUrl": "http://addressbook.local/",
        "seed": 20260401,
        "viewport": {"w": 1024, "h": 768},
        "start": "home",
        "entries": entries,
        "generators": {"people": PEOPLE},
        "rowTemplates": {"functional": FUNCTIONAL_ROW, "plain": PLAIN_ROW},
        "pages": pages,
        "transitions": transitions,
    }


def render(a, name, entries, state_id):
    tpl = a["pages"][name]
    nodes = copy.deepcopy(tpl["nodes"])
    count = len(entries)
    for n in nodes:
        if "text" in n:
            n["text"] = n["text"].replace("{count}", str(count))
    rows = tpl["rows"]
    rt = a["rowTemplates"][rows["template"]]
    parent = next(n for n in nodes if n["id"] == rows["parent"])
    parent["bbox"][3] = rows["pitch"] * count
    next_id = max(n["id"] for n in nodes) + 1
    for i, e in enumerate(entries):
        remap = {}
        for n in rt["nodes"]:
            remap[n["id"]] = next_id
            next_id += 1
        for n in rt["nodes"]:
            c = copy.deepcopy(n)
            c["id"] = remap[n["id"]]
            c["children"] = [remap[x] for x in n["children"]]
            c["bbox"][0] += rows["origin"][0]
            c["bbox"][1] += rows["origin"][1] + i * rows["pitch"]
            if "text" in c:
                for k in ("first", "last", "phone"):
                    c["text"] = c["text"].replace("{" + k + "}", e[k])
                c["text"] = c["text"].replace("{index}", str(i + 1))
            nodes.append(c)
        parent["children"].append(remap[rt["root"]])
    return {
        "stateId": state_id,
        "url": a["baseUrl"] + "#/" + name,
        "viewport": a["viewport"],
        "root": tpl["root"],
        "nodes": nodes,
    }


def dump(obj, path):
    with open(path, "w") as f:
        json.dump(obj, f, indent=1)
        f.write("\n")


def main():
    base = app()
    dump(base, os.path.join(HERE, "app.json"))
    dump(app(variant=True), os.path.join(HERE, "app-variant.json"))

    dup = ENTRIES + [ENTRIES[-1]]
    dup2 = ENTRIES + [ENTRIES[-1], ENTRIES[-1]]
    snaps = {
        "s1": ("home", ENTRIES),
        "s2": ("list", ENTRIES),
        "s3": ("new", ENTRIES),
        "s5": ("new", dup),
        "s6": ("new", OTHER),
        "s7": ("new", dup2),
        "s1b": ("home", OTHER),
        "s1c": ("home", dup),
        "s2b": ("list", OTHER),
    }
    sdir = os.path.join(HERE, "snapshots")
    for sid, (name, entries) in snaps.items():
        dump(render(base, name, entries, sid), os.path.join(sdir, sid + ".json"))

    pairs = [
        ("s1", "s1", "Clone"), ("s2", "s2", "Clone"), ("s3", "s3", "Clone"),
        ("s3", "s6", "Nd"), ("s1", "s1b", "Nd"), ("s2", "s2b", "Nd"),
        ("s3", "s5", "Nd"), ("s3", "s7", "Nd"), ("s5", "s7", "Nd"), ("s1", "s1c", "Nd"),
        ("s1", "s3", "Distinct"), ("s1", "s2", "Distinct"), ("s2", "s3", "Distinct"),
        ("s2", "s5", "Distinct"), ("s1", "s5", "Distinct"), ("s2", "s6", "Distinct"),
    ]
    with open(os.path.join(HERE, "pairs.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["first", "second", "label"])
        for a, b, lab in pairs:
            w.writerow(["snapshots/" + a + ".json", "snapshots/" + b + ".json", lab])


if __name__ == "__main__":
    main()
