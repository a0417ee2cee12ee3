"""Recursive partitioning around the exact OR-clause split optimizer.

Growth per node: stop checks, then the perfect-separability fast path,
then re-binarize the node's cases and solve for the optimal rule.  Each
node's yes child holds the cases answering yes to any selected question.
Post-hoc leaf-budget pruning, one-vs-rest multi-class ensembles, and a
versioned JSON model format live here too.
"""

from __future__ import annotations

import copy
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from orsplit.binarize import (
    BinarizeConfig,
    Question,
    build_matrix,
    find_separable_column,
)
from orsplit.dataset import BinaryTarget, Dataset, binarize_target
from orsplit.solver import SolverConfig, enum_solve, resolve_min_node_size

MODEL_FORMAT = "orsplit-model"
MODEL_VERSION = 1


@dataclass(frozen=True)
class TreeConfig:
    """Growth controls; solver and binarizer knobs plus stopping rules.

    stop_prob is the majority fraction at which a node becomes a leaf
    without trying to split.  max_leaves (when set) prunes the grown tree
    down to that many leaves; max_depth (when set) caps recursion depth.
    """

    max_rules: int = 2
    min_node_size: int = 0
    node_size_policy: str = "sqrt"  # or "fourth-root"
    no_same_gender_children: bool = False
    time_limit: float | None = None
    node_budget: int | None = None
    stop_prob: float = 0.95
    max_leaves: int | None = None
    max_depth: int | None = None
    bin_size: int = 0
    nseg_numeric: int = 20
    categorical_dummy_threshold: int = 30

    def __post_init__(self) -> None:
        if not 0.5 < self.stop_prob <= 1.0:
            raise ValueError("stop_prob must be in (0.5, 1]")
        if self.max_leaves is not None and self.max_leaves < 2:
            raise ValueError("max_leaves must be >= 2")
        if self.node_size_policy not in ("sqrt", "fourth-root"):
            raise ValueError("node_size_policy must be 'sqrt' or 'fourth-root'")

    def solver_config(self, min_node_size: int) -> SolverConfig:
        return SolverConfig(
            max_rules=self.max_rules,
            min_node_size=min_node_size,
            no_same_gender_children=self.no_same_gender_children,
            time_limit=self.time_limit,
            node_budget=self.node_budget,
        )

    def binarize_config(self) -> BinarizeConfig:
        return BinarizeConfig(
            bin_size=self.bin_size,
            nseg_numeric=self.nseg_numeric,
            categorical_dummy_threshold=self.categorical_dummy_threshold,
        )


@dataclass
class TreeNode:
    id: int
    depth: int
    pos: int
    neg: int
    prob_positive: float
    rule: tuple[int, ...] | None = None  # indices into Tree.questions
    yes_child: "TreeNode | None" = None
    no_child: "TreeNode | None" = None
    leaf_label: str | None = None

    @property
    def is_leaf(self) -> bool:
        return self.leaf_label is not None

    @property
    def total(self) -> int:
        return self.pos + self.neg


@dataclass
class Tree:
    root: TreeNode
    positive_label: str
    negative_label: str
    config: TreeConfig
    questions: list[Question] = field(default_factory=list)
    n_train: int = 0

    def rule_questions(self, node: TreeNode) -> list[Question]:
        return [self.questions[k] for k in node.rule]

    def nodes(self) -> list[TreeNode]:
        """All nodes in preorder (yes subtree before no subtree)."""
        out: list[TreeNode] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            out.append(node)
            if not node.is_leaf:
                stack.append(node.no_child)
                stack.append(node.yes_child)
        return out

    def leaves(self) -> list[TreeNode]:
        return [nd for nd in self.nodes() if nd.is_leaf]

    def depth(self) -> int:
        return max(nd.depth for nd in self.nodes())


@dataclass
class Ensemble:
    """One tree per class level; prediction takes the highest-scoring level."""

    trees: list[Tree]
    classes: list[str]


def _majority_label(pos: int, neg: int, positive_label: str, negative_label: str) -> str:
    # ties go to the negative class so positive claims stay conservative
    return positive_label if pos > neg else negative_label


def grow(
    d: Dataset,
    y: BinaryTarget,
    cfg: TreeConfig,
    negative_label: str | None = None,
) -> Tree:
    """Grow a binary classification tree on the full dataset.

    A node becomes a leaf when its majority fraction reaches stop_prob,
    when it is too small to produce two admissible children, when the
    depth budget is hit, or when no feasible strictly-improving split
    exists.  Otherwise it splits on a perfectly separating threshold if
    one exists, else on the optimizer's best rule.
    """
    yvec = y.y
    pos_total = int(yvec.sum())
    if pos_total == 0 or pos_total == d.n:
        raise ValueError("training data contains a single class")
    if negative_label is None:
        others = [c for c in d.classes if c != y.positive_label]
        negative_label = others[0] if len(others) == 1 else f"not {y.positive_label}"

    bin_cfg = cfg.binarize_config()
    questions: list[Question] = []
    qindex: dict[tuple, int] = {}

    def intern(q: Question) -> int:
        key = (q.column, q.op, q.threshold, q.levels)
        if key not in qindex:
            qindex[key] = len(questions)
            questions.append(q)
        return qindex[key]

    def leafify(node: TreeNode) -> TreeNode:
        node.leaf_label = _majority_label(node.pos, node.neg, y.positive_label, negative_label)
        return node

    def build(rows: np.ndarray, depth: int) -> TreeNode:
        ysub = yvec[rows]
        total = len(rows)
        pos = int(ysub.sum())
        neg = total - pos
        node = TreeNode(id=-1, depth=depth, pos=pos, neg=neg, prob_positive=pos / total)
        eff = resolve_min_node_size(cfg.min_node_size, total, cfg.node_size_policy)
        if (
            max(pos, neg) / total >= cfg.stop_prob
            or total < 2 * eff
            or (cfg.max_depth is not None and depth >= cfg.max_depth)
        ):
            return leafify(node)

        sep = find_separable_column(d, yvec, rows)
        if sep is not None:
            sub_vals = d.columns[sep.column].values[rows]
            q0 = sep.to_question(0)
            z = q0.evaluate(sub_vals).astype(bool)
            q = sep.to_question(int(z.sum()))
            node.rule = (intern(q),)
            node.yes_child = leafify(TreeNode(-1, depth + 1, pos, 0, 1.0))
            node.no_child = leafify(TreeNode(-1, depth + 1, 0, neg, 0.0))
            return node

        sub = d.subset(rows)
        ysub_t = BinaryTarget(ysub, y.positive_label)
        try:
            bm = build_matrix(sub, ysub_t, bin_cfg)
        except ValueError:
            return leafify(node)
        res = enum_solve(bm.B, ysub, cfg.solver_config(eff))
        if (
            not res.feasible
            or res.best_eval.nu >= pos * neg  # no strict Gini reduction
            or res.best_eval.z_sum in (0, total)
        ):
            return leafify(node)
        z = bm.B[:, list(res.best)].any(axis=1)
        node.rule = tuple(sorted(intern(bm.questions[k]) for k in res.best))
        node.yes_child = build(rows[z], depth + 1)
        node.no_child = build(rows[~z], depth + 1)
        return node

    root = build(np.arange(d.n), 0)
    tree = Tree(
        root=root,
        positive_label=y.positive_label,
        negative_label=negative_label,
        config=cfg,
        questions=questions,
        n_train=d.n,
    )
    _assign_ids(tree)
    return tree


def _assign_ids(tree: Tree) -> None:
    counter = 0

    def visit(node: TreeNode) -> None:
        nonlocal counter
        node.id = counter
        counter += 1
        if not node.is_leaf:
            visit(node.yes_child)
            visit(node.no_child)

    visit(tree.root)


def grow_multiclass(d: Dataset, cfg: TreeConfig) -> Ensemble:
    """One binary tree per class level (that level versus all others)."""
    if len(d.classes) < 3:
        raise ValueError("two-class data: use grow() directly")
    trees = []
    for level in d.classes:
        y = binarize_target(d, level)
        if int(y.y.sum()) == 0:
            raise ValueError(f"class {level!r} absent from training data")
        trees.append(grow(d, y, cfg, negative_label=f"not {level}"))
    return Ensemble(trees=trees, classes=list(d.classes))


def prune_to_max_leaves(t: Tree, max_leaves: int) -> Tree:
    """Collapse internal nodes until the leaf count fits the budget.

    Each step collapses the both-children-are-leaves node whose collapse
    adds the fewest training misclassifications (ties: deepest node, then
    smallest id) into a majority-label leaf.
    """
    if max_leaves < 2:
        raise ValueError("max_leaves must be >= 2")
    t = copy.deepcopy(t)
    while len(t.leaves()) > max_leaves:
        candidates = []
        for node in t.nodes():
            if node.is_leaf or not (node.yes_child.is_leaf and node.no_child.is_leaf):
                continue
            as_leaf_errors = min(node.pos, node.neg)
            child_errors = min(node.yes_child.pos, node.yes_child.neg) + min(
                node.no_child.pos, node.no_child.neg
            )
            candidates.append((as_leaf_errors - child_errors, -node.depth, node.id, node))
        if not candidates:
            break
        _, _, _, victim = min(candidates, key=lambda c: c[:3])
        victim.rule = None
        victim.yes_child = None
        victim.no_child = None
        victim.leaf_label = _majority_label(
            victim.pos, victim.neg, t.positive_label, t.negative_label
        )
    return t


# ---------------------------------------------------------------------------
# model files


def _question_to_dict(q: Question) -> dict:
    return {
        "column": q.column,
        "name": q.name,
        "op": q.op,
        "threshold": q.threshold,
        "levels": sorted(q.levels) if q.levels is not None else None,
        "support": q.support,
    }


def _question_from_dict(obj: dict) -> Question:
    return Question(
        column=int(obj["column"]),
        name=obj["name"],
        op=obj["op"],
        threshold=obj["threshold"],
        levels=frozenset(obj["levels"]) if obj["levels"] is not None else None,
        support=int(obj.get("support", 0)),
    )


def _tree_to_dict(t: Tree) -> dict:
    nodes = []
    for node in sorted(t.nodes(), key=lambda nd: nd.id):
        nodes.append(
            {
                "id": node.id,
                "depth": node.depth,
                "pos": node.pos,
                "neg": node.neg,
                "prob_positive": node.prob_positive,
                "rule": list(node.rule) if node.rule is not None else None,
                "yes": node.yes_child.id if node.yes_child else None,
                "no": node.no_child.id if node.no_child else None,
                "leaf": node.leaf_label,
            }
        )
    return {
        "positive_label": t.positive_label,
        "negative_label": t.negative_label,
        "n_train": t.n_train,
        "config": asdict(t.config),
        "questions": [_question_to_dict(q) for q in t.questions],
        "nodes": nodes,
    }


def _tree_from_dict(obj: dict) -> Tree:
    questions = [_question_from_dict(q) for q in obj["questions"]]
    by_id: dict[int, TreeNode] = {}
    for nd in obj["nodes"]:
        node = TreeNode(
            id=int(nd["id"]),
            depth=int(nd["depth"]),
            pos=int(nd["pos"]),
            neg=int(nd["neg"]),
            prob_positive=float(nd["prob_positive"]),
            leaf_label=nd["leaf"],
        )
        if nd["rule"] is not None:
            rule = tuple(int(k) for k in nd["rule"])
            for k in rule:
                if not 0 <= k < len(questions):
                    raise ValueError(f"invalid question reference {k} in node {node.id}")
            node.rule = rule
        by_id[node.id] = node
    for nd in obj["nodes"]:
        node = by_id[int(nd["id"])]
        if node.rule is not None:
            try:
                node.yes_child = by_id[int(nd["yes"])]
                node.no_child = by_id[int(nd["no"])]
            except (KeyError, TypeError):
                raise ValueError(f"node {node.id}: missing child reference") from None
        elif node.leaf_label is None:
            raise ValueError(f"node {node.id}: neither rule nor leaf label")
    if 0 not in by_id:
        raise ValueError("model has no root node (id 0)")
    return Tree(
        root=by_id[0],
        positive_label=obj["positive_label"],
        negative_label=obj["negative_label"],
        config=TreeConfig(**obj["config"]),
        questions=questions,
        n_train=int(obj.get("n_train", 0)),
    )


def save_model(model: Tree | Ensemble, path: str) -> None:
    """Write a tree or ensemble as versioned JSON."""
    if isinstance(model, Tree):
        doc = {"format": MODEL_FORMAT, "version": MODEL_VERSION, "kind": "tree"}
        doc["tree"] = _tree_to_dict(model)
    else:
        doc = {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "kind": "one_vs_rest",
            "classes": list(model.classes),
            "trees": [_tree_to_dict(t) for t in model.trees],
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path: str) -> Tree | Ensemble:
    """Load a model file; lossless inverse of save_model."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: malformed model file ({exc})") from None
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path}: not a model file")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"{path}: unsupported model version {doc.get('version')!r}")
    if doc["kind"] == "tree":
        return _tree_from_dict(doc["tree"])
    if doc["kind"] == "one_vs_rest":
        trees = [_tree_from_dict(t) for t in doc["trees"]]
        return Ensemble(trees=trees, classes=list(doc["classes"]))
    raise ValueError(f"{path}: unknown model kind {doc['kind']!r}")


# ---------------------------------------------------------------------------
# reporting


def describe_rule(t: Tree, node: TreeNode) -> str:
    return " | ".join(q.label() for q in t.rule_questions(node))


def summarize(t: Tree, confusion=None) -> str:
    """Plain-text tree report: per-node rows and an optional confusion footer."""
    lines = [
        f"tree: positive={t.positive_label} negative={t.negative_label} "
        f"nodes={len(t.nodes())} leaves={len(t.leaves())} depth={t.depth()}"
    ]
    total = t.root.total
    for node in t.nodes():
        indent = "  " * node.depth
        cover = 100.0 * node.total / total
        label = node.leaf_label if node.is_leaf else _majority_label(
            node.pos, node.neg, t.positive_label, t.negative_label
        )
        head = (
            f"{indent}node {node.id}: predict {label}, prob({t.positive_label})="
            f"{node.prob_positive:.4f}, {cover:.1f}% of cases, "
            f"{t.positive_label}={node.pos}, {t.negative_label}={node.neg}"
        )
        lines.append(head)
        if not node.is_leaf:
            lines.append(
                f"{indent}  split [{describe_rule(t, node)}] -> yes: node "
                f"{node.yes_child.id}, no: node {node.no_child.id}"
            )
    if confusion is not None:
        lines.append("training confusion matrix (rows=predicted, cols=actual):")
        labels = confusion.labels
        width = max(len(str(x)) for x in labels) + 2
        lines.append(" " * width + "".join(f"{x:>{width}}" for x in labels))
        for i, row_label in enumerate(labels):
            row = "".join(f"{int(confusion.matrix[i, j]):>{width}}" for j in range(len(labels)))
            lines.append(f"{row_label:>{width}}" + row)
        lines.append(f"training accuracy: {confusion.accuracy:.4f}")
    return "\n".join(lines)


def to_dot(t: Tree) -> str:
    """DOT-format digraph of the tree for graph rendering tools."""
    lines = ["digraph tree {", "  node [fontname=monospace];"]
    for node in t.nodes():
        if node.is_leaf:
            lines.append(
                f'  n{node.id} [shape=oval label="{node.leaf_label}\\n'
                f'p={node.prob_positive:.3f} n={node.total}"];'
            )
        else:
            rule = describe_rule(t, node).replace('"', "'")
            lines.append(f'  n{node.id} [shape=box label="{rule}"];')
            lines.append(f'  n{node.id} -> n{node.yes_child.id} [label="yes"];')
            lines.append(f'  n{node.id} -> n{node.no_child.id} [label="no"];')
    lines.append("}")
    return "\n".join(lines)
