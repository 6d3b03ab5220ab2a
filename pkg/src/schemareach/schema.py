"""Schema model: entity tree rooted at Thing, structural arcs, property specs.

Entities are interned to dense integer handles (``Schema.handle``); the
public functions take and return entity names.
"""

from __future__ import annotations

from dataclasses import dataclass

from .facts import SchemaFacts

__all__ = [
    "SchemaError",
    "PropertySpec",
    "Schema",
    "build_schema",
    "super_of",
    "lifted_neighbors",
    "ROOT_ALIASES",
]

# Some exports call the root "entity"; either name is taken as the root.
ROOT_ALIASES = ("thing", "entity")


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class PropertySpec:
    name: str
    type_tag: str
    mandatory: bool


class Schema:
    """Immutable, validated graph schema.

    Attributes
    ----------
    names : tuple of str
        Entity names indexed by handle; handle 0 is the root.
    parent : tuple of int
        Parent handle per entity, ``-1`` for the root.
    arcs : frozenset of (int, int)
        Structural relationship arcs as handle pairs.
    """

    def __init__(self, names, parent, arcs, property_specs):
        self.names = tuple(names)
        self.parent = tuple(parent)
        self.arcs = frozenset(arcs)
        self._index = {name: h for h, name in enumerate(self.names)}
        self._specs = {h: tuple(specs) for h, specs in property_specs.items()}

        n = len(self.names)
        children = [[] for _ in range(n)]
        for h, p in enumerate(self.parent):
            if p >= 0:
                children[p].append(h)
        self._children = tuple(tuple(c) for c in children)

        chains = [None] * n
        for h in range(n):
            chain = []
            cur = h
            while cur >= 0:
                chain.append(cur)
                cur = self.parent[cur]
            chains[h] = tuple(chain)
        self._chains = tuple(chains)

        self._lifted = tuple(self._compute_lifted(h) for h in range(n))

    @property
    def root(self):
        return self.names[0]

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def __repr__(self):
        return f"Schema(root={self.root!r}, entities={len(self.names)}, arcs={len(self.arcs)})"

    def handle(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown entity {name!r}") from None

    def name(self, handle):
        return self.names[handle]

    def chain(self, h):
        """Ancestor-or-self handles of ``h``, ending at the root."""
        return self._chains[h]

    def descendants(self, h):
        out = []
        stack = [h]
        while stack:
            cur = stack.pop()
            out.append(cur)
            stack.extend(self._children[cur])
        return out

    def lifted(self, h):
        """Lifted one-hop successors of ``h`` as a frozenset of handles."""
        return self._lifted[h]

    def _compute_lifted(self, h):
        ancestors = set(self._chains[h])
        ranges = {g for d, g in self.arcs if d in ancestors}
        out = set()
        for g in ranges:
            out.update(self.descendants(g))
        return frozenset(out)

    def own_properties(self, name):
        return self._specs.get(self.handle(name), ())

    def properties(self, name):
        """Property specs declared on ``name`` or any of its ancestors, nearest first."""
        out = []
        for h in self._chains[self.handle(name)]:
            out.extend(self._specs.get(h, ()))
        return out


def _root_name(facts):
    mentioned = set(facts.entities)
    for c, p in facts.subclass_pairs:
        mentioned.update((c, p))
    for alias in ROOT_ALIASES:
        if alias in mentioned:
            return alias
    return ROOT_ALIASES[0]


def build_schema(facts: SchemaFacts, root=None) -> Schema:
    """Validate schema facts and build a :class:`Schema`.

    The root (Thing) is ``root`` if given, else ``thing`` or ``entity`` when
    either is mentioned, else a fresh ``thing``. Entities without a declared
    parent become children of the root. Names appearing only in
    ``subclassOf`` facts are declared implicitly.

    Raises
    ------
    SchemaError
        On a subclass cycle, an entity with two parents, a parent declared
        for the root, or an arc or property on an undeclared entity.
    """
    root = root or _root_name(facts)
    names = [root]
    index = {root: 0}

    def intern(name):
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    for e in facts.entities:
        intern(e)
    for c, p in facts.subclass_pairs:
        intern(c)
        intern(p)

    parent = [0] * len(names)
    parent[0] = -1
    declared_parent = {}
    for c, p in facts.subclass_pairs:
        hc, hp = index[c], index[p]
        if hc == 0:
            raise SchemaError(f"root entity {root!r} cannot have a parent (subclassOf({c}, {p}))")
        if hc in declared_parent:
            raise SchemaError(
                f"multiple inheritance: {c!r} is a subclass of both "
                f"{names[declared_parent[hc]]!r} and {p!r}"
            )
        declared_parent[hc] = hp
        parent[hc] = hp

    # every chain must end at the root
    state = [0] * len(names)  # 0 unseen, 1 on stack, 2 done
    state[0] = 2
    for start in range(len(names)):
        path = []
        cur = start
        while state[cur] == 0:
            state[cur] = 1
            path.append(cur)
            cur = parent[cur]
        if state[cur] == 1:
            cycle = path[path.index(cur):]
            raise SchemaError("subclass cycle: " + " -> ".join(names[h] for h in cycle + [cur]))
        for h in path:
            state[h] = 2

    arcs = set()
    for d, r in facts.arcs:
        for end in (d, r):
            if end not in index:
                raise SchemaError(f"arc({d}, {r}) references undeclared entity {end!r}")
        arcs.add((index[d], index[r]))

    specs = {}
    for p in facts.property_specs:
        if p.owner not in index:
            raise SchemaError(f"property {p.name!r} declared on undeclared entity {p.owner!r}")
        owned = specs.setdefault(index[p.owner], [])
        if any(s.name == p.name for s in owned):
            raise SchemaError(f"duplicate property {p.name!r} on {p.owner!r}")
        owned.append(PropertySpec(p.name, p.type_tag, p.mandatory))

    return Schema(names, parent, arcs, specs)


def super_of(schema, e):
    """``[e, parent(e), ..., root]``."""
    return [schema.names[h] for h in schema.chain(schema.handle(e))]


def lifted_neighbors(schema, a):
    """Entities one lifted hop from ``a``.

    ``b`` qualifies when some arc joins an ancestor-or-self of ``a`` to an
    ancestor-or-self of ``b``.
    """
    return {schema.names[h] for h in schema.lifted(schema.handle(a))}
