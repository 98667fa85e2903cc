"""Binary classification trees (Gini impurity) and bagged forests of them.

A tree leaf stores the positive-class fraction of its training rows; a
lone tree scores with that fraction, a forest scores with the share of
trees whose leaf majority votes positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class TreeNode:
    value: float                     # positive fraction of training rows here
    n: int
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _best_split(x: np.ndarray, y01: np.ndarray, features: np.ndarray, min_leaf: int):
    """Lowest weighted-Gini split over the given features; None if no valid one.

    Ties keep the first candidate in (feature order, threshold order), which
    makes tree construction deterministic.
    """
    n = len(y01)
    best = None  # (gini, feature, threshold)
    for f in features:
        order = np.argsort(x[:, f], kind="stable")
        xs = x[order, f]
        cum_pos = np.cumsum(y01[order])
        i = np.arange(1, n)  # split between positions i-1 and i
        valid = (xs[1:] != xs[:-1]) & (i >= min_leaf) & (n - i >= min_leaf)
        if not valid.any():
            continue
        i = i[valid]
        pos_l = cum_pos[i - 1]
        pos_r = cum_pos[-1] - pos_l
        p_l = pos_l / i
        p_r = pos_r / (n - i)
        gini = (i * 2.0 * p_l * (1.0 - p_l) + (n - i) * 2.0 * p_r * (1.0 - p_r)) / n
        j = int(np.argmin(gini))
        cand = (float(gini[j]), int(f), float(0.5 * (xs[i[j] - 1] + xs[i[j]])))
        if best is None or cand[0] < best[0]:
            best = cand
    return best


def build_tree(x: np.ndarray, y01: np.ndarray, min_leaf: int = 1,
               max_depth: int | None = None, feature_fraction: float = 1.0,
               rng: np.random.Generator | None = None, depth: int = 0) -> TreeNode:
    """Grow a binary Gini tree; stops on purity, min_leaf, or max_depth.

    feature_fraction < 1 samples a feature subset per split (requires rng);
    at 1.0 no randomness is consumed at all.
    """
    n, p = x.shape
    node = TreeNode(value=float(y01.mean()), n=n)
    if node.value in (0.0, 1.0) or n < 2 * min_leaf:
        return node
    if max_depth is not None and depth >= max_depth:
        return node

    if feature_fraction >= 1.0:
        features = np.arange(p)
    else:
        m = max(1, int(round(feature_fraction * p)))
        features = np.sort(rng.choice(p, size=m, replace=False))

    split = _best_split(x, y01, features, min_leaf)
    if split is None:
        return node
    _, node.feature, node.threshold = split
    mask = x[:, node.feature] <= node.threshold
    node.left = build_tree(x[mask], y01[mask], min_leaf, max_depth,
                           feature_fraction, rng, depth + 1)
    node.right = build_tree(x[~mask], y01[~mask], min_leaf, max_depth,
                            feature_fraction, rng, depth + 1)
    return node


def tree_fractions(root: TreeNode, x: np.ndarray) -> np.ndarray:
    """Leaf positive fraction for each row of x."""
    out = np.empty(len(x))
    stack = [(root, np.arange(len(x)))]
    while stack:
        node, idx = stack.pop()
        if node.is_leaf:
            out[idx] = node.value
            continue
        mask = x[idx, node.feature] <= node.threshold
        stack.append((node.left, idx[mask]))
        stack.append((node.right, idx[~mask]))
    return out


@dataclass
class CartModel:
    root: TreeNode

    def score(self, x_std: np.ndarray) -> np.ndarray:
        return tree_fractions(self.root, x_std)


@dataclass
class ForestModel:
    trees: list[TreeNode]

    def score(self, x_std: np.ndarray) -> np.ndarray:
        votes = np.zeros(len(x_std))
        for tree in self.trees:
            votes += tree_fractions(tree, x_std) > 0.5
        return votes / len(self.trees)


def fit_cart(x_std: np.ndarray, labels: np.ndarray, hp: dict, rng_seed: int) -> CartModel:
    y01 = (labels == 1).astype(float)
    root = build_tree(x_std, y01,
                      min_leaf=int(hp.get("min_leaf", 1)),
                      max_depth=hp.get("max_depth"))
    return CartModel(root=root)


def fit_random_forest(x_std: np.ndarray, labels: np.ndarray, hp: dict,
                      rng_seed: int) -> ForestModel:
    y01 = (labels == 1).astype(float)
    n_trees = int(hp.get("n_trees", 100))
    frac = float(hp.get("feature_fraction", 1.0))
    min_leaf = int(hp.get("min_leaf", 1))
    rng = np.random.default_rng(rng_seed)
    n = len(y01)
    trees = []
    for _ in range(n_trees):
        idx = rng.integers(0, n, size=n)
        trees.append(build_tree(x_std[idx], y01[idx], min_leaf=min_leaf,
                                feature_fraction=frac, rng=rng))
    return ForestModel(trees=trees)
