"""Scratch probe: regime leader + delay-curriculum step1 + Bellman advantage.
Stage A: step1. Stage B: forced silent/maxpow contrast (advantage and realized reward)
bucketed by predecessor-window variance quartiles. Stage C: kappa2 sweep of learned
step2 behavior. Stage D: delay/aoi baselines' delay_eq1_frac."""
import sys, time
import numpy as np

sys.path.insert(0, "src")
from mtcc.config import load_config
from mtcc import orchestrator as orch
from mtcc.orchestrator import (EpisodeOptions, FINAL_EVAL_BASE, PHASE_EVAL, Trainer,
                               load_pc_into, save_stack)

T0 = time.time()
def log(msg):
    print("[%6.0fs] %s" % (time.time() - T0, msg), flush=True)

CFG = load_config("configs/desk.cfg").with_overrides(pc_train_steps=6)
N_LINKS = CFG.platoon.n_vehicles - 1
K = CFG.train.control_intervals

# ---- stage A: step1 ----------------------------------------------------------------
base = Trainer(CFG, "runs/probe6/step1", algo="mtcc")
base.step1(0)
save_stack("runs/probe6/step1/ckpt", base.stack, CFG, base.algo)
log("step1 done, recorded=%d" % len(base.recorded))

# ---- stage B: forced-policy contrast -------------------------------------------------
real_adv = orch.advantage_bellman
real_rwd = orch.pc_reward
adv_log, rwd_log = [], []
def adv_spy(*args):
    v = real_adv(*args)
    adv_log.append(v)
    return v
def rwd_spy(*args):
    v = real_rwd(*args)
    rwd_log.append(v)
    return v

def forced_eval(stack, idx_per_link, episodes=30):
    orch.advantage_bellman = adv_spy
    orch.pc_reward = rwd_spy
    saved = [a.act for a in stack.rra]
    for link, a in enumerate(stack.rra):
        a.act = (lambda idx: (lambda dense, seq, eps, rng: idx))(idx_per_link[link])
    rows = []   # (link, window_var, tau, adv, reward) for k = 1..K-1
    taus_all = []
    try:
        for j in range(episodes):
            adv_log.clear(); rwd_log.clear()
            opts = EpisodeOptions(phase=PHASE_EVAL, iteration=0, actor="pc")
            res = orch.run_episode(CFG, base.algo, stack, FINAL_EVAL_BASE + j, opts,
                                   base.leader, base.sampler)
            assert len(adv_log) == (K + 1) * N_LINKS
            assert len(rwd_log) == K * N_LINKS
            for i, (var, tau) in enumerate(res.var_tau_pairs):
                k, link = 1 + i // N_LINKS, i % N_LINKS
                if k >= K:
                    continue
                rows.append((link, var, tau, adv_log[N_LINKS + i], rwd_log[i + N_LINKS]))
                taus_all.append(tau)
    finally:
        orch.advantage_bellman = real_adv
        orch.pc_reward = real_rwd
        for a, f in zip(stack.rra, saved):
            a.act = f
    return np.array(rows), np.bincount(taus_all, minlength=7)

def buckets(rows, label, link=None):
    r = rows if link is None else rows[rows[:, 0] == link]
    var, adv, rwd = r[:, 1], r[:, 3], r[:, 4]
    q25, q75 = np.quantile(var, 0.25), np.quantile(var, 0.75)
    lo, hi = var <= q25, var >= q75
    log("%s%s: adv lo=%.4f hi=%.4f | rwd lo=%.4f hi=%.4f (q25=%.4f q75=%.3f n=%d)"
        % (label, "" if link is None else " link%d" % link,
           adv[lo].mean(), adv[hi].mean(), rwd[lo].mean(), rwd[hi].mean(),
           q25, q75, len(r)))
    return adv[lo].mean(), adv[hi].mean(), rwd[lo].mean(), rwd[hi].mean()

silent_idx = [0, 0, 0]
maxpow_idx = [4, 8, 4]
rows_s, hist_s = forced_eval(base.stack, silent_idx)
rows_m, hist_m = forced_eval(base.stack, maxpow_idx)
log("tau hist silent=%s maxpow=%s" % (hist_s.tolist(), hist_m.tolist()))
for link in (None, 0, 1, 2):
    als, ahs, rls, rhs = buckets(rows_s, "silent", link)
    alm, ahm, rlm, rhm = buckets(rows_m, "maxpow", link)
    log("  Delta(fed-starved)%s: adv lo=%.4f hi=%.4f (%.2fx) | rwd lo=%.4f hi=%.4f (%.2fx)"
        % ("" if link is None else " link%d" % link,
           alm - als, ahm - ahs, (ahm - ahs) / max(alm - als, 1e-9),
           rlm - rls, rhm - rhs, (rhm - rhs) / max(rlm - rls, 1e-9)))

# ---- stage C: kappa2 sweep, learned step2 -------------------------------------------
def pipeline(algo, k2, tag):
    cfg = CFG.with_overrides(advantage_weight=k2)
    tr = Trainer(cfg, "runs/probe6/%s" % tag, algo=algo)
    load_pc_into(tr.stack, "runs/probe6/step1/ckpt")
    n = tr.preseed(base.recorded)
    tr.step2(0)
    tr.final_eval(0, episodes=30, collect_trace=False)
    ev = tr.iteration_eval[-1]
    log("%s k2=%.1f preseed=%d: rra=%.3f thr=%.2fMbps pc=%.3f d1=%.3f "
        "lo/hi=%.3f/%.3f delay_mean=%.2f"
        % (algo, k2, n, ev["rra_return_mean"], ev["throughput_bps_mean"] / 1e6,
           ev["sum_pc_return_mean"], ev["delay_eq1_frac"],
           ev["p_tau_gt1_low_var"], ev["p_tau_gt1_high_var"], ev["delay_mean"]))
    return ev

for k2 in (0.25, 0.5, 1.0):
    pipeline("mtcc", k2, "k2_%s" % str(k2).replace(".", "p"))

# ---- stage D: baselines ------------------------------------------------------------
for algo in ("delay", "aoi"):
    pipeline(algo, 1.0, algo)
log("all done")
