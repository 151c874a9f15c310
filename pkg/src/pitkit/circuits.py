"""Arithmetic circuits: general DAGs, depth-4 sum-of-product-of-sparse form,
and composed circuits C(f_1, ..., f_m) with explicit sparse inputs.

Node kinds for the DAG are input/const/add/mul with n-ary add and mul.  Nodes
may only reference earlier nodes (validated), which keeps evaluation a single
forward pass.  Three JSON circuit kinds round-trip bit-exactly: "dag",
"depth4", and "composed".
"""

from __future__ import annotations

from .fields import FieldError, FieldSpec
from .polynomials import (
    BudgetExceeded,
    ParseError,
    SparsePoly,
    poly_from_text,
    poly_to_text,
)

DEFAULT_EXPAND_BUDGET = 10 ** 6


class BlackboxOracle:
    """Evaluation-only access to a polynomial: point in, raw value out."""

    __slots__ = ("field", "nvars", "degree_bound", "fn")

    def __init__(self, field, nvars, fn, degree_bound=None):
        self.field = field
        self.nvars = nvars
        self.fn = fn
        self.degree_bound = degree_bound

    def __call__(self, point):
        return self.fn(point)


class Circuit:
    """An arithmetic circuit as a topologically ordered node list."""

    __slots__ = ("field", "nvars", "nodes", "output")

    def __init__(self, field: FieldSpec, nvars: int, nodes, output: int):
        nodes = tuple(self._check_node(field, nvars, i, n) for i, n in enumerate(nodes))
        if not 0 <= output < len(nodes):
            raise ValueError("output id out of range")
        self.field = field
        self.nvars = nvars
        self.nodes = nodes
        self.output = output

    @staticmethod
    def _check_node(field, nvars, i, node):
        op = node[0]
        if op == "input":
            if not 0 <= node[1] < nvars:
                raise ValueError("input variable out of range")
            return ("input", node[1])
        if op == "const":
            return ("const", field.normalize(node[1]))
        if op in ("add", "mul"):
            kids = tuple(node[1])
            if not kids:
                raise ValueError("%s node needs children" % op)
            if any(not 0 <= k < i for k in kids):
                raise ValueError("node %d references a non-earlier node" % i)
            return (op, kids)
        raise ValueError("unknown node kind %r" % (op,))

    def evaluate(self, point):
        """Evaluate at a tuple of raw elements; memoized forward pass."""
        if len(point) != self.nvars:
            raise ValueError("point arity != nvars")
        field = self.field
        pt = [field.normalize(v) for v in point]
        vals = [None] * len(self.nodes)
        for i, node in enumerate(self.nodes):
            op = node[0]
            if op == "input":
                vals[i] = pt[node[1]]
            elif op == "const":
                vals[i] = node[1]
            elif op == "add":
                acc = field.zero()
                for k in node[1]:
                    acc = field.add(acc, vals[k])
                vals[i] = acc
            else:
                acc = field.one()
                for k in node[1]:
                    acc = field.mul(acc, vals[k])
                    if field.is_zero(acc):
                        break
                vals[i] = acc
        return vals[self.output]

    def oracle(self) -> BlackboxOracle:
        return BlackboxOracle(
            self.field, self.nvars, self.evaluate, degree_bound=self.syntactic_degree()
        )

    def syntactic_degree(self) -> int:
        degs = [0] * len(self.nodes)
        for i, node in enumerate(self.nodes):
            op = node[0]
            if op == "input":
                degs[i] = 1
            elif op == "const":
                degs[i] = 0
            elif op == "add":
                degs[i] = max(degs[k] for k in node[1])
            else:
                degs[i] = sum(degs[k] for k in node[1])
        return degs[self.output]

    def expand(self, budget: int = DEFAULT_EXPAND_BUDGET) -> SparsePoly:
        """Expand to a SparsePoly; raise BudgetExceeded when any intermediate
        grows past `budget` terms (the error message says to use PIT instead)."""
        field, nvars = self.field, self.nvars
        vals = [None] * len(self.nodes)
        for i, node in enumerate(self.nodes):
            op = node[0]
            if op == "input":
                vals[i] = SparsePoly.variable(field, nvars, node[1])
            elif op == "const":
                vals[i] = SparsePoly.constant(field, nvars, node[1])
            elif op == "add":
                acc = SparsePoly.zero(field, nvars)
                for k in node[1]:
                    acc = acc + vals[k]
                vals[i] = acc
            else:
                acc = SparsePoly.one(field, nvars)
                for k in node[1]:
                    acc = acc * vals[k]
                vals[i] = acc
            if vals[i].num_terms() > budget:
                raise BudgetExceeded(
                    "expansion exceeds %d terms at node %d; use PIT on the "
                    "blackbox instead" % (budget, i)
                )
        return vals[self.output]

    # -- construction helpers ----------------------------------------------------

    @staticmethod
    def from_poly(f: SparsePoly) -> "Circuit":
        """A depth-2 DAG computing f (one mul node per term)."""
        nodes = []
        var_ids = {}

        def var_node(i):
            if i not in var_ids:
                nodes.append(("input", i))
                var_ids[i] = len(nodes) - 1
            return var_ids[i]

        term_ids = []
        for exps, c in f.sorted_terms():
            nodes.append(("const", c))
            cid = len(nodes) - 1
            kids = [cid]
            for i, e in enumerate(exps):
                kids.extend([var_node(i)] * e)
            nodes.append(("mul", tuple(kids)))
            term_ids.append(len(nodes) - 1)
        if not term_ids:
            nodes.append(("const", f.field.zero()))
            term_ids.append(len(nodes) - 1)
        nodes.append(("add", tuple(term_ids)))
        return Circuit(f.field, f.nvars, nodes, len(nodes) - 1)

    @staticmethod
    def compose(outer: "Circuit", inners) -> "Circuit":
        """Plug sparse polynomials into the outer circuit's inputs.

        outer has m = len(inners) variables; every inner polynomial lives in
        one common ring, which becomes the ring of the result.
        """
        if outer.nvars != len(inners):
            raise ValueError("outer arity != number of inner polynomials")
        if not inners:
            raise ValueError("need at least one inner polynomial")
        field, nvars = inners[0].field, inners[0].nvars
        if field != outer.field:
            raise FieldError("outer and inner fields differ")
        for g in inners:
            if g.field != field or g.nvars != nvars:
                raise ValueError("inner polynomials live in different rings")
        nodes = []
        roots = []
        for g in inners:
            sub = Circuit.from_poly(g)
            offset = len(nodes)
            for node in sub.nodes:
                if node[0] in ("add", "mul"):
                    nodes.append((node[0], tuple(k + offset for k in node[1])))
                else:
                    nodes.append(node)
            roots.append(sub.output + offset)
        offset = len(nodes)
        for node in outer.nodes:
            if node[0] == "input":
                # alias: re-point to the inner root via a 1-ary add
                nodes.append(("add", (roots[node[1]],)))
            elif node[0] == "const":
                nodes.append(node)
            else:
                nodes.append((node[0], tuple(k + offset for k in node[1])))
        return Circuit(field, nvars, nodes, outer.output + offset)

    # -- JSON ----------------------------------------------------------------------

    def to_json_dict(self) -> dict:
        nodes = []
        for node in self.nodes:
            if node[0] == "input":
                nodes.append({"op": "input", "var": node[1]})
            elif node[0] == "const":
                nodes.append({"op": "const", "value": self.field.scalar_to_json(node[1])})
            else:
                nodes.append({"op": node[0], "args": list(node[1])})
        return {
            "field": self.field.to_json(),
            "nvars": self.nvars,
            "kind": "dag",
            "nodes": nodes,
            "output": self.output,
        }

    @staticmethod
    def from_json_dict(obj) -> "Circuit":
        field = FieldSpec.from_json(obj["field"])
        nodes = []
        for nd in obj["nodes"]:
            op = nd["op"]
            if op == "input":
                nodes.append(("input", nd["var"]))
            elif op == "const":
                nodes.append(("const", field.scalar_from_json(nd["value"])))
            elif op in ("add", "mul"):
                nodes.append((op, tuple(nd["args"])))
            else:
                raise ParseError("unknown node op %r" % op)
        return Circuit(field, obj["nvars"], nodes, obj["output"])


class Depth4Circuit:
    """Sum of k products of sparse polynomials of degree at most delta."""

    __slots__ = ("field", "nvars", "delta", "rows")

    def __init__(self, field, nvars, delta, rows):
        rows = tuple(tuple(r) for r in rows)
        if not rows or any(not r for r in rows):
            raise ValueError("need k >= 1 nonempty rows")
        for row in rows:
            for f in row:
                if f.field != field or f.nvars != nvars:
                    raise ValueError("factor in a different ring")
                if f.is_zero:
                    raise ValueError("zero factor not allowed")
                d = f.degree()
                if d is not None and d > delta:
                    raise ValueError("factor degree %d exceeds delta=%d" % (d, delta))
        self.field = field
        self.nvars = nvars
        self.delta = delta
        self.rows = rows

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def s(self) -> int:
        return max(len(r) for r in self.rows)

    def degree_bound(self) -> int:
        return self.delta * self.s

    def term(self, i: int) -> SparsePoly:
        """Expanded product of row i."""
        acc = SparsePoly.one(self.field, self.nvars)
        for f in self.rows[i]:
            acc = acc * f
        return acc

    def subcircuit(self, I) -> "Depth4Circuit":
        I = sorted(I)
        if not I or any(not 0 <= i < self.k for i in I):
            raise ValueError("row subset out of range")
        return Depth4Circuit(self.field, self.nvars, self.delta, [self.rows[i] for i in I])

    def evaluate(self, point):
        field = self.field
        pt = [field.normalize(v) for v in point]
        acc = field.zero()
        for row in self.rows:
            prod = field.one()
            for f in row:
                prod = field.mul(prod, f.eval(pt))
                if field.is_zero(prod):
                    break
            acc = field.add(acc, prod)
        return acc

    def oracle(self) -> BlackboxOracle:
        return BlackboxOracle(
            self.field, self.nvars, self.evaluate, degree_bound=self.degree_bound()
        )

    def expand(self, budget: int = DEFAULT_EXPAND_BUDGET) -> SparsePoly:
        acc = SparsePoly.zero(self.field, self.nvars)
        for row in self.rows:
            prod = SparsePoly.one(self.field, self.nvars)
            for f in row:
                prod = prod * f
                if prod.num_terms() > budget:
                    raise BudgetExceeded(
                        "expansion exceeds %d terms; use PIT on the blackbox"
                        % budget
                    )
            acc = acc + prod
            if acc.num_terms() > budget:
                raise BudgetExceeded(
                    "expansion exceeds %d terms; use PIT on the blackbox" % budget
                )
        return acc

    def sparse_factors(self):
        """Distinct factors, deterministic order of first appearance."""
        seen = []
        for row in self.rows:
            for f in row:
                if f not in seen:
                    seen.append(f)
        return seen

    def to_json_dict(self) -> dict:
        return {
            "field": self.field.to_json(),
            "nvars": self.nvars,
            "kind": "depth4",
            "delta": self.delta,
            "rows": [[poly_to_text(f) for f in row] for row in self.rows],
        }

    @staticmethod
    def from_json_dict(obj) -> "Depth4Circuit":
        field = FieldSpec.from_json(obj["field"])
        nvars = obj["nvars"]
        rows = [
            [poly_from_text(t, field, nvars) for t in row] for row in obj["rows"]
        ]
        return Depth4Circuit(field, nvars, obj["delta"], rows)


class ComposedCircuit:
    """C'(x) = C(f_1(x), ..., f_m(x)) with an explicit sparse input list.

    The outer circuit runs over y_1..y_m; keeping the inner polynomials
    explicit is what lets the sparse-input PIT constructions read off their
    parameters (m, degrees, sparsity).
    """

    __slots__ = ("outer", "inputs")

    def __init__(self, outer: Circuit, inputs):
        inputs = tuple(inputs)
        if outer.nvars != len(inputs):
            raise ValueError("outer arity != number of inputs")
        if not inputs:
            raise ValueError("need at least one input polynomial")
        f0 = inputs[0]
        for f in inputs:
            if f.field != f0.field or f.nvars != f0.nvars:
                raise ValueError("inputs live in different rings")
        if outer.field != f0.field:
            raise FieldError("outer and inner fields differ")
        self.outer = outer
        self.inputs = inputs

    @property
    def field(self):
        return self.outer.field

    @property
    def nvars(self):
        return self.inputs[0].nvars

    def evaluate(self, point):
        inner_vals = [f.eval(point) for f in self.inputs]
        return self.outer.evaluate(inner_vals)

    def degree_bound(self) -> int:
        dmax = max((f.degree() or 0) for f in self.inputs)
        return self.outer.syntactic_degree() * dmax

    def oracle(self) -> BlackboxOracle:
        return BlackboxOracle(
            self.field, self.nvars, self.evaluate, degree_bound=self.degree_bound()
        )

    def to_circuit(self) -> Circuit:
        return Circuit.compose(self.outer, list(self.inputs))

    def expand(self, budget: int = DEFAULT_EXPAND_BUDGET) -> SparsePoly:
        return self.to_circuit().expand(budget)

    def to_json_dict(self) -> dict:
        outer = self.outer.to_json_dict()
        outer.pop("field")
        outer.pop("kind")
        return {
            "field": self.field.to_json(),
            "nvars": self.nvars,
            "kind": "composed",
            "outer": outer,
            "inputs": [poly_to_text(f) for f in self.inputs],
        }

    @staticmethod
    def from_json_dict(obj) -> "ComposedCircuit":
        field = FieldSpec.from_json(obj["field"])
        outer_obj = dict(obj["outer"])
        outer_obj["field"] = obj["field"]
        m = len(obj["inputs"])
        outer_obj.setdefault("nvars", m)
        outer = Circuit.from_json_dict(outer_obj)
        inputs = [poly_from_text(t, field, obj["nvars"]) for t in obj["inputs"]]
        return ComposedCircuit(outer, inputs)


def circuit_from_json_dict(obj):
    kind = obj.get("kind")
    if kind == "dag":
        return Circuit.from_json_dict(obj)
    if kind == "depth4":
        return Depth4Circuit.from_json_dict(obj)
    if kind == "composed":
        return ComposedCircuit.from_json_dict(obj)
    raise ParseError("unknown circuit kind %r" % (kind,))
