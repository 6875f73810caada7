"""Random patterns and values for matcher tests, plus an independent oracle.

Patterns and values are plain Python trees:

* ``("bind", name)``, ``("lit", atom)``
* ``("list", [children])``, ``("tuple", [children])``, ``("dict", {key: child})``

Atoms are ints, strings and booleans.  The same trees render as source text
so the matcher can be driven end to end through the language.
"""

import random

ATOMS = [0, 1, 2, "a", "b", True, False]
KEYS = ["k", "m", "n"]


def gen_pattern(rng, depth, names):
    kind = rng.choice(["bind", "lit", "lit"] if depth == 0 else ["bind", "lit", "list", "tuple", "dict"])
    if kind == "bind":
        name = f"v{len(names)}"
        names.append(name)
        return ("bind", name)
    if kind == "lit":
        return ("lit", rng.choice(ATOMS))
    if kind == "dict":
        keys = rng.sample(KEYS, rng.randint(0, 2))
        return ("dict", {k: gen_pattern(rng, depth - 1, names) for k in sorted(keys)})
    return (kind, [gen_pattern(rng, depth - 1, names) for _ in range(rng.randint(0, 2))])


def value_like(rng, pattern, depth):
    """A value that often matches ``pattern`` and sometimes differs slightly."""
    if rng.random() < 0.15:
        return gen_value(rng, depth)
    kind, arg = pattern
    if kind == "bind":
        return gen_value(rng, depth)
    if kind == "lit":
        return arg
    if kind == "dict":
        return {k: value_like(rng, v, max(depth - 1, 0)) for k, v in arg.items()}
    items = [value_like(rng, c, max(depth - 1, 0)) for c in arg]
    if rng.random() < 0.1:
        items.append(gen_value(rng, 0))
    return list(items) if kind == "list" else tuple(items)


def gen_value(rng, depth):
    kind = rng.choice(["atom"] if depth == 0 else ["atom", "atom", "list", "tuple", "dict"])
    if kind == "atom":
        return rng.choice(ATOMS)
    if kind == "dict":
        return {k: gen_value(rng, depth - 1) for k in sorted(rng.sample(KEYS, rng.randint(0, 2)))}
    items = [gen_value(rng, depth - 1) for _ in range(rng.randint(0, 2))]
    return items if kind == "list" else tuple(items)


def gen_case(rng, depth=3):
    names = []
    pattern = gen_pattern(rng, depth, names)
    return pattern, value_like(rng, pattern, depth)


# -- oracle ---------------------------------------------------------------------

def _atom_key(x):
    # Booleans and numbers are distinct; ints compare as numbers.
    if isinstance(x, bool):
        return ("bool", x)
    if isinstance(x, (int, float)):
        return ("num", float(x))
    return ("str", x)


def canon(v):
    """Canonical hashable form of a value; equal forms mean structurally equal."""
    if isinstance(v, list):
        return ("list",) + tuple(canon(x) for x in v)
    if isinstance(v, tuple):
        return ("tuple",) + tuple(canon(x) for x in v)
    if isinstance(v, dict):
        return ("dict",) + tuple(sorted((k, canon(x)) for k, x in v.items()))
    return _atom_key(v)


def oracle_match(pattern, value):
    """Bindings as ``{name: canonical value}`` or None, by explicit case analysis."""
    out = {}
    stack = [(pattern, value)]
    while stack:
        (kind, arg), v = stack.pop()
        if kind == "bind":
            out[arg] = canon(v)
        elif kind == "lit":
            if canon(arg) != canon(v):
                return None
        elif kind == "dict":
            if not isinstance(v, dict) or sorted(v) != sorted(arg):
                return None
            stack.extend((arg[k], v[k]) for k in arg)
        else:
            want = list if kind == "list" else tuple
            if type(v) is not want or len(v) != len(arg):
                return None
            stack.extend(zip(arg, v))
    return out


# -- source rendering ---------------------------------------------------------------

def atom_source(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return f'"{x}"'
    return str(x)


def _seq_source(kind, parts):
    if kind == "list":
        return "[" + ", ".join(parts) + "]"
    if len(parts) == 1:
        return "(" + parts[0] + ",)"
    return "(" + ", ".join(parts) + ")"


def pattern_source(p):
    kind, arg = p
    if kind == "bind":
        return "var " + arg
    if kind == "lit":
        return atom_source(arg)
    if kind == "dict":
        return "[" + (", ".join(f'"{k}" => {pattern_source(c)}' for k, c in arg.items()) or "=>") + "]"
    return _seq_source(kind, [pattern_source(c) for c in arg])


def value_source(v):
    if isinstance(v, dict):
        return "[" + (", ".join(f'"{k}" => {value_source(c)}' for k, c in v.items()) or "=>") + "]"
    if isinstance(v, list):
        return _seq_source("list", [value_source(c) for c in v])
    if isinstance(v, tuple):
        return _seq_source("tuple", [value_source(c) for c in v])
    return atom_source(v)


def canon_source(c):
    """Render a canonical value the way the interpreter displays it."""
    tag = c[0]
    if tag == "bool":
        return "true" if c[1] else "false"
    if tag == "num":
        return str(int(c[1]))
    if tag == "str":
        return f'"{c[1]}"'
    if tag == "dict":
        return "[" + (", ".join(f'"{k}" => {canon_source(x)}' for k, x in c[1:]) or "=>") + "]"
    return _seq_source(tag, [canon_source(x) for x in c[1:]])


def match_script(pattern, value):
    """Script echoing the sorted bindings when ``value`` matches ``pattern``."""
    names = []
    stack = [pattern]
    while stack:
        kind, arg = stack.pop()
        if kind == "bind":
            names.append(arg)
        elif kind == "dict":
            stack.extend(arg.values())
        elif kind in ("list", "tuple"):
            stack.extend(arg)
    names.sort()
    shown = "[" + ", ".join(names) + "]"
    return (f"var e = Event.new;\n"
            f"at (e?({pattern_source(pattern)})) echo({shown});\n"
            f"e!({value_source(value)});\n"), names


def expected_lines(pattern, value):
    """What :func:`match_script` prints according to the oracle."""
    bindings = oracle_match(pattern, value)
    lines = ["Event_0xb"]
    if bindings is not None:
        lines.append("*** [" + ", ".join(canon_source(bindings[k]) for k in sorted(bindings)) + "]")
    return lines


def cases(seed, count, depth=3):
    rng = random.Random(seed)
    return [gen_case(rng, depth) for _ in range(count)]
