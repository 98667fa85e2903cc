"""Scratch verification of fixture-derived statistics (deleted before finishing)."""
import numpy as np
from scipy.stats import rankdata
import csv

def load(path):
    with open(path) as f:
        rows = list(csv.reader(f))
    names = [r[0] for r in rows[1:]]
    vals = np.array([[float(x) for x in r[1:]] for r in rows[1:]])
    return names, rows[0][1:], vals

def avg_ranks(vals):
    # rank 1 = highest value, midranks for ties, per column
    R = np.apply_along_axis(lambda c: rankdata(-c, method="average"), 0, vals)
    return R.mean(axis=1)

base = "/root/pkg/src/defectbench/fixtures/"
names, _, mdp_auc = load(base + "mdp_auc.csv")
_, _, mdp_h = load(base + "mdp_h.csv")
_, _, gh_auc = load(base + "github_auc.csv")
_, _, gh_h = load(base + "github_h.csv")

# Table 6 reference columns (paper)
t6 = {
    "BaggingModelANN":        (2.7, 4.7, 4.2, 6.7),
    "BoostingModelAdaBoostM1":(4.6, 6.1, 6.7, 6.8),
    "CARTModel":              (17.0, 17.0, 17.0, 16.8),
    "LRModel":                (12.3, 11.9, 10.8, 11.3),
    "MLPModel":               (6.1, 4.1, 4.2, 4.0),
    "RFModelR":               (2.4, 1.7, 2.8, 1.8),
    "RidgeRegressionModel":   (10.3, 10.8, 12.2, 12.2),
    "SVMModelLibLinear":      (12.0, 14.3, 12.4, 12.7),
    "SVMModelRbf":            (7.7, 7.0, 4.3, 3.2),
    "WEKAModelADT":           (3.1, 4.1, 4.5, 5.0),
    "WEKAModelBayesNetTAN":   (5.4, 5.9, 10.7, 11.7),
    "WEKAModelJ48":           (13.7, 11.8, 12.8, 12.5),
    "WEKAModelKnn":           (9.5, 10.0, 7.8, 5.6),
    "WEKAModelLMT":           (8.0, 5.9, 3.8, 3.8),
    "WEKAModelNaiveBayes":    (13.5, 15.1, 14.5, 15.5),
    "WEKAModelRBFNetwork":    (10.4, 8.7, 8.9, 8.3),
    "WEKAModelVP":            (14.3, 14.0, 15.3, 15.1),
}
# columns: GitHub AUC, GitHub h, MDP AUC, MDP h
mats = {"gh_auc": (gh_auc, 0), "gh_h": (gh_h, 1), "mdp_auc": (mdp_auc, 2), "mdp_h": (mdp_h, 3)}
for label, (m, col) in mats.items():
    r = avg_ranks(m)
    print(f"== {label}")
    worst = 0
    for i, n in enumerate(names):
        ref = t6[n][col]
        diff = abs(r[i] - ref)
        worst = max(worst, diff)
        flag = "" if diff <= 0.1 else "  <-- OFF"
        print(f"  {n:26s} computed {r[i]:6.3f}  table {ref:5.1f}  diff {diff:5.3f}{flag}")
    print(f"  worst |diff| = {worst:.3f}")

# Friedman tie-corrected
def friedman(vals):
    k, N = vals.shape
    R = np.apply_along_axis(lambda c: rankdata(-c, method="average"), 0, vals)
    S = R.sum(axis=1)
    num = (k - 1) * (np.sum(S**2) - N**2 * k * (k + 1)**2 / 4)
    den = np.sum(R**2) - N * k * (k + 1)**2 / 4
    stat = num / den
    from scipy.special import gammaincc
    p = gammaincc((k - 1) / 2, stat / 2)
    return stat, p

for label, (m, _) in mats.items():
    s, p = friedman(m)
    print(f"friedman {label}: stat={s:.3f} p={p:.3e}")

# correlations
def corr(a, b):
    a = a.ravel(); b = b.ravel()
    return np.corrcoef(a, b)[0, 1]

print("MDP cellwise corr:", corr(mdp_auc, mdp_h))
print("MDP classifier-average corr:", corr(mdp_auc.mean(axis=1), mdp_h.mean(axis=1)))
print("GitHub cellwise corr:", corr(gh_auc, gh_h))
print("GitHub classifier-average corr:", corr(gh_auc.mean(axis=1), gh_h.mean(axis=1)))

# top-5 GitHub H subset re-rank
subset = ["RFModelR", "MLPModel", "WEKAModelADT", "BaggingModelANN", "WEKAModelLMT"]
idx = [names.index(s) for s in subset]
sub = gh_h[idx]
r5 = avg_ranks(sub)
print("top-5 GitHub H ranks:", dict(zip(subset, np.round(r5, 3))))
gaps = [(subset[i], subset[j], abs(r5[i]-r5[j])) for i in range(5) for j in range(i+1,5)]
print("max gap:", max(g[2] for g in gaps), " gaps>=1.58:", [g for g in gaps if g[2] >= 1.58])
rf_rank = r5[subset.index("RFModelR")]
print("RF best:", rf_rank == r5.min(), "RF gap to all others >= 1.58:", all(abs(rf_rank - r5[i]) >= 1.58 for i in range(5) if subset[i] != "RFModelR"))

# alternative subset with TAN instead of LMT
subset2 = ["RFModelR", "MLPModel", "WEKAModelADT", "BaggingModelANN", "WEKAModelBayesNetTAN"]
idx2 = [names.index(s) for s in subset2]
r52 = avg_ranks(gh_h[idx2])
print("alt top-5:", dict(zip(subset2, np.round(r52, 3))))

# Bayesian signed-rank quick check on Table 7 MDP AUC non-pe pairs
def bayes_sr(a, b, lo, hi, mc=50000, seed=1):
    rng = np.random.default_rng(seed)
    d = a - b
    z = np.concatenate([[0.0], d])
    m = len(z)
    S = z[:, None] + z[None, :]
    above = (S > 2*hi) + 0.5*(S == 2*hi)
    below = (S < 2*lo) + 0.5*(S == 2*lo)
    W = rng.dirichlet([0.5] + [1.0]*(m-1), mc)
    right = np.einsum('si,ij,sj->s', W, above, W)
    left = np.einsum('si,ij,sj->s', W, below, W)
    rope = 1.0 - right - left
    tri = np.stack([left, rope, right], axis=1)
    winners = np.argmax(tri, axis=1)
    freq = np.bincount(winners, minlength=3) / mc
    return freq  # p_left, p_rope, p_right

pairs = [
    ("BaggingModelANN", "WEKAModelBayesNetTAN", "BaggingModelANN"),
    ("BoostingModelAdaBoostM1", "MLPModel", "MLPModel"),
    ("BoostingModelAdaBoostM1", "RFModelR", "RFModelR"),
    ("BoostingModelAdaBoostM1", "SVMModelRbf", "SVMModelRbf"),
    ("BoostingModelAdaBoostM1", "WEKAModelBayesNetTAN", "BoostingModelAdaBoostM1"),
    ("MLPModel", "WEKAModelBayesNetTAN", "MLPModel"),
    ("RFModelR", "WEKAModelBayesNetTAN", "RFModelR"),
    ("SVMModelRbf", "WEKAModelBayesNetTAN", "SVMModelRbf"),
    ("WEKAModelADT", "WEKAModelBayesNetTAN", "WEKAModelADT"),
    ("WEKAModelBayesNetTAN", "WEKAModelLMT", "WEKAModelLMT"),
]
match = 0
for a_name, b_name, winner in pairs:
    a = mdp_auc[names.index(a_name)]
    b = mdp_auc[names.index(b_name)]
    pl, pe, pr = bayes_sr(a, b, -0.01, 0.01)
    verdict = "inconclusive"
    if pr > 0.95: verdict = a_name
    elif pl > 0.95: verdict = b_name
    elif pe > 0.95: verdict = "pe"
    ok = verdict == winner
    match += ok
    print(f"{a_name[:20]:20s} vs {b_name[:20]:20s}: L={pl:.3f} R={pe:.3f}... wait", f"left={pl:.3f} rope={pe:.3f} right={pr:.3f} verdict={verdict:20s} expect={winner:20s} {'OK' if ok else 'MISS'}")
print(f"matched {match}/{len(pairs)} (need >= 5)")
