"""Acceptance battery.  Each test prints one PASS/FAIL line for its
criterion; run with `pytest tests/test_acceptance.py -v -s` to see them.

Criterion 11 is split in two: the quadratic conditions for the
ALLC-vs-ALLR3 pairing agree with the engine and pass, while the
cubic/quadratic conditions for ALLD-vs-ALLR3 presuppose a three-round
environment cycle that the dynamics does not deliver for that pairing (a
theta = pi gate has a two-round cycle, making the joint cycle six rounds),
so the agreement check fails and is kept failing as documentation rather
than loosened.
"""
import math
import time

import numpy as np
import pytest

from qrpd.actions import ActionTriple, named_action
from qrpd.game import (FOUR_ACTION_ORDER, GamePayoffs, four_action_matrix,
                       one_shot_payoffs)
from qrpd.nash import (Verdict, analytic_condition, classical_baseline,
                       classify_strict_ne, scan_region)
from qrpd.qcore import basis_probabilities, evolve_round, make_unitary
from qrpd.repeated import (STRATEGIES, closed_form_meta_matrix, constant,
                           detect_period, engine_meta_matrix, trace,
                           truncated_payoff)
from qrpd.stochastic import (MCConfig, compare_models, markov_value,
                             monte_carlo_payoff, propagator_matrix)

GAME = GamePayoffs(3, 0, 5, 1)
EPS_GRID = (0.0, 0.2, math.pi / 8, 0.5, math.pi / 4)
W_GRID = tuple(0.1 * k for k in range(1, 10))

TABULATED = ("classical-tft-alld", "ctft-allq", "ctft-alld", "ctft-allh",
             "qtft-allc", "qtft-alld", "qtft-allh", "allc-allq", "alld-allq",
             "allc-allh", "allc-allr3", "alld-allr3")


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def boundary_crossings(axis, codes_1d):
    """(position, cell size) of each verdict change along one axis."""
    changes = [i for i in range(len(codes_1d) - 1)
               if codes_1d[i] != codes_1d[i + 1]]
    cell = axis[1] - axis[0]
    return [(axis[i], cell) for i in changes]


def test_criterion_1_one_shot_oracle():
    worst = 0.0
    for eps in EPS_GRID:
        closed = four_action_matrix(eps, GAME)
        for i, na in enumerate(FOUR_ACTION_ORDER):
            for j, nb in enumerate(FOUR_ACTION_ORDER):
                engine, _ = one_shot_payoffs(named_action(na),
                                             named_action(nb), eps, GAME)
                worst = max(worst, abs(closed[i, j] - engine))
    report("1", worst <= 1e-12,
           f"one-shot engine vs closed-form table, 16 pairs x 5 eps, "
           f"max |diff| = {worst:.2e} (tol 1e-12)")


def test_criterion_2_repeated_closed_forms():
    worst = 0.0
    worst_at = ""
    for pair in TABULATED:
        for w in W_GRID:
            for eps in EPS_GRID:
                cf = closed_form_meta_matrix(pair, w, eps, GAME)
                per = engine_meta_matrix(pair, w, eps, GAME, "periodic")
                tru = engine_meta_matrix(pair, w, eps, GAME, "truncated",
                                         tol=1e-12)
                gap = max(np.max(np.abs(cf - per)), np.max(np.abs(cf - tru)),
                          np.max(np.abs(per - tru)))
                if gap > worst:
                    worst, worst_at = gap, f"{pair} w={w:.1f} eps={eps:.3f}"
    report("2", worst <= 1e-9,
           f"12 tabulated pairs, truncated/periodic/closed-form three-way "
           f"agreement over 9x5 grid, max |diff| = {worst:.2e} at {worst_at} "
           f"(tol 1e-9)")


def test_criterion_3_classical_baseline():
    ws = np.linspace(0.0, 0.99, 512)
    ok = True
    detail = ""
    for w in ws:
        _, cls = classical_baseline(GAME, float(w))
        tft = cls.verdict in (Verdict.FIRST, Verdict.BOTH)
        alld = cls.verdict in (Verdict.SECOND, Verdict.BOTH)
        if not alld:
            ok, detail = False, f"ALLD not strict NE at w={w:.4f}"
            break
        cell = ws[1] - ws[0]
        if abs(w - 0.5) > cell and tft != (w > 0.5):
            ok, detail = False, f"TFT verdict wrong at w={w:.4f}"
            break
    report("3", ok, detail or "classical: ALLD strict NE at every sampled w; "
                             "TFT strict NE exactly above w = 1/2")


def test_criterion_4_ctft_alld_region():
    grid = scan_region("ctft-alld", GAME, w_steps=512, eps_steps=512)
    codes = grid.codes
    col_constant = bool(np.all(codes == codes[:, :1]))
    crossings = boundary_crossings(grid.w_axis, codes[:, 0])
    ok = col_constant and len(crossings) == 2
    detail = f"eps-independent={col_constant}, {len(crossings)} boundaries"
    if ok:
        (b1, cell), (b2, _) = crossings
        ok = abs(b1 - 0.5) <= cell and abs(b2 - 2 / 3) <= cell
        mid = codes[np.searchsorted(grid.w_axis, 0.58), 0]
        lo = codes[np.searchsorted(grid.w_axis, 0.3), 0]
        hi = codes[np.searchsorted(grid.w_axis, 0.8), 0]
        ok = ok and mid == 0 and lo == 2 and hi == 1
        detail = (f"boundaries at w = {b1:.4f} (target 1/2) and {b2:.4f} "
                  f"(target 2/3) within one cell ({cell:.4f}); SECOND / "
                  f"NEITHER / FIRST bands confirmed, eps-independent")
    report("4", ok, detail)


def test_criterion_5_qtft_alld_max_entanglement():
    eps = math.pi / 4
    qtft_all, alld_none = True, True
    for w in np.linspace(0.0, 0.99, 101):
        m = closed_form_meta_matrix("qtft-alld", float(w), eps, GAME)
        cls = classify_strict_ne(m)
        qtft_all &= cls.verdict in (Verdict.FIRST, Verdict.BOTH)
        alld_none &= cls.verdict not in (Verdict.SECOND, Verdict.BOTH)
    report("5", qtft_all and alld_none,
           f"at eps = pi/4: QTFT strict NE for all sampled w ({qtft_all}), "
           f"ALLD strict NE for none ({alld_none})")


def test_criterion_6_alld_allq_regions():
    grid = scan_region("alld-allq", GAME, w_steps=64, eps_steps=512)
    row_constant = bool(np.all(grid.codes == grid.codes[:1, :]))
    crossings = boundary_crossings(grid.eps_axis, grid.codes[0])
    no_both = not np.any(grid.codes == 3)
    ok = row_constant and no_both and len(crossings) == 2
    detail = f"w-independent={row_constant}, no-BOTH={no_both}"
    if ok:
        t1 = 0.5 * math.asin(math.sqrt(0.2))
        t2 = 0.5 * math.asin(math.sqrt(0.4))
        (b1, cell), (b2, _) = crossings
        ok = abs(b1 - t1) <= cell and abs(b2 - t2) <= cell
        detail += (f", boundaries {b1:.4f}/{b2:.4f} vs targets "
                   f"{t1:.4f}/{t2:.4f} within one cell")
    alt = scan_region("alld-allq", GamePayoffs(3, 0, 4, 2), w_steps=16,
                      eps_steps=256)
    has_both = bool(np.any(alt.codes == 3))
    ok = ok and has_both
    detail += f"; payoffs (3,0,4,2) with R+P > T+S shows a BOTH region: {has_both}"
    report("6", ok, detail)


def test_criterion_7_allh_boundaries():
    targets = {
        "allh-alld": (0.5 * math.asin(math.sqrt(1 / 7)), math.pi / 8),
        "allh-allc": (0.5 * math.asin(math.sqrt(2 / 7)), math.pi / 8),
    }
    ok = True
    details = []
    for pair, (lo, hi) in targets.items():
        grid = scan_region(pair, GAME, w_steps=16, eps_steps=512)
        row_constant = bool(np.all(grid.codes == grid.codes[:1, :]))
        crossings = boundary_crossings(grid.eps_axis, grid.codes[0])
        good = row_constant and len(crossings) == 2
        if good:
            (b1, cell), (b2, _) = crossings
            good = (abs(b1 - min(lo, hi)) <= cell
                    and abs(b2 - max(lo, hi)) <= cell)
            details.append(f"{pair}: {b1:.4f}/{b2:.4f} vs "
                           f"{min(lo, hi):.4f}/{max(lo, hi):.4f}")
        else:
            details.append(f"{pair}: structure wrong "
                           f"(w-independent={row_constant}, "
                           f"{len(crossings)} boundaries)")
        ok = ok and good
    report("7", ok, "; ".join(details) + " (all w-independent)")


def _same_gate_propagator_forms(theta, alpha, phi, eps, m):
    """Closed forms of the same-gate m-round transition amplitudes."""
    Ce, Se = math.cos(eps), math.sin(eps)
    gm = math.cos(m * theta / 2) - 1j * math.cos(alpha) * math.sin(m * theta / 2)
    dm = -1j * np.exp(-1j * phi) * math.sin(alpha) * math.sin(m * theta / 2)
    gc, dc = np.conj(gm), np.conj(dm)
    psi = np.empty((4, 4), complex)
    psi[0, 0] = Ce**2 * gm**2 + Se**2 * gc**2 + 1j * Ce * Se * (dm**2 - dc**2)
    psi[0, 1] = psi[0, 2] = (-Ce**2 * gm * dc + Se**2 * gc * dm
                             + 1j * Ce * Se * (gc * dm + gm * dc))
    psi[0, 3] = Ce**2 * dc**2 + Se**2 * dm**2 + 1j * Ce * Se * (gc**2 - gm**2)
    psi[1, 0] = (Ce**2 * gm * dm - Se**2 * gc * dc
                 + 1j * Ce * Se * (gm * dm + gc * dc))
    psi[1, 1] = abs(gm) ** 2
    psi[1, 2] = -abs(dm) ** 2
    psi[1, 3] = (-Ce**2 * gc * dc + Se**2 * gm * dm
                 - 1j * Ce * Se * (gm * dm + gc * dc))
    psi[2, 0] = psi[1, 0]
    psi[2, 1] = -abs(dm) ** 2
    psi[2, 2] = abs(gm) ** 2
    psi[2, 3] = psi[1, 3]
    psi[3, 0] = Ce**2 * dm**2 + Se**2 * dc**2 + 1j * Ce * Se * (gm**2 - gc**2)
    psi[3, 1] = psi[3, 2] = (Ce**2 * gc * dm - Se**2 * gm * dc
                             - 1j * Ce * Se * (gc * dm + gm * dc))
    psi[3, 3] = Ce**2 * gc**2 + Se**2 * gm**2 + 1j * Ce * Se * (dc**2 - dm**2)
    return psi


def test_criterion_8_property_suites():
    rng = np.random.default_rng(20240809)
    worst_unitary = 0.0
    worst_norm = 0.0
    worst_sym = 0.0
    worst_rows = 0.0
    worst_forms = 0.0
    for _ in range(100):
        th, al, ph = (rng.uniform(0, 2 * math.pi), rng.uniform(0, math.pi),
                      rng.uniform(0, 2 * math.pi))
        u = make_unitary(th, al, ph).matrix
        worst_unitary = max(worst_unitary,
                            float(np.max(np.abs(u @ u.conj().T - np.eye(2)))))
        eps = rng.uniform(0, math.pi / 2)
        m = int(rng.integers(1, 7))
        action = ActionTriple(m * th % (2 * math.pi), al, ph)
        prop = propagator_matrix(action, action, eps)
        worst_rows = max(worst_rows,
                         float(np.max(np.abs(prop.transition.sum(axis=1) - 1))))
        worst_forms = max(worst_forms, float(np.max(np.abs(
            prop.amplitudes - _same_gate_propagator_forms(th, al, ph, eps, m)))))
        ua = make_unitary(rng.uniform(0, 2 * math.pi), rng.uniform(0, math.pi),
                          rng.uniform(0, 2 * math.pi))
        ub = make_unitary(rng.uniform(0, 2 * math.pi), rng.uniform(0, math.pi),
                          rng.uniform(0, 2 * math.pi))
        state = evolve_round([(ua, ub)] * 3, eps)
        worst_norm = max(worst_norm,
                         abs(float(np.sum(np.abs(state.amplitudes) ** 2)) - 1))
        p_mirror = basis_probabilities(
            evolve_round([(ua, ub)] * 3, math.pi / 2 - eps))
        worst_sym = max(worst_sym, float(np.max(np.abs(
            basis_probabilities(state) - p_mirror))))
        na, nb = rng.choice(FOUR_ACTION_ORDER), rng.choice(FOUR_ACTION_ORDER)
        w = rng.uniform(0.0, 0.9)
        v1 = truncated_payoff(STRATEGIES[f"ALL{na}"], STRATEGIES[f"ALL{nb}"],
                              eps, GAME, w)
        v2 = truncated_payoff(STRATEGIES[f"ALL{na}"], STRATEGIES[f"ALL{nb}"],
                              math.pi / 2 - eps, GAME, w)
        worst_sym = max(worst_sym, abs(v1[0] - v2[0]), abs(v1[1] - v2[1]))
    long_state = evolve_round(
        [(make_unitary(0.9, 1.1, 0.3), make_unitary(2.2, 0.4, 5.0))] * 1000, 0.31)
    worst_norm = max(worst_norm,
                     abs(float(np.sum(np.abs(long_state.amplitudes) ** 2)) - 1))
    ok = max(worst_unitary, worst_norm, worst_sym, worst_rows, worst_forms) <= 1e-12
    report("8", ok,
           f"unitarity {worst_unitary:.1e}, norm {worst_norm:.1e} (incl. 1000 "
           f"rounds), eps-mirror payoff symmetry {worst_sym:.1e}, row "
           f"stochasticity {worst_rows:.1e}, propagator closed forms vs "
           f"direct on 100 draws {worst_forms:.1e} (all tol 1e-12)")


def test_criterion_9_periodicity():
    names = ("C", "D", "Q", "H")
    ok = True
    notes = []
    for na in names:
        for nb in names:
            sa, sb = constant(named_action(na)), constant(named_action(nb))
            t = trace(sa, sb, 0.3, GAME, 40)
            two_is_period = float(np.max(np.abs(
                t.probabilities[2:] - t.probabilities[:-2]))) <= 1e-10
            info = detect_period(sa, sb, 0.3, 100)
            degenerate = na == nb and na in ("C", "Q")
            expected = 1 if degenerate else 2
            good = two_is_period and info.period == expected
            if not good:
                ok = False
                notes.append(f"({na},{nb}) period={info.period}")
    info = detect_period(STRATEGIES["ALLR3"], STRATEGIES["ALLR3"], 0.3, 1000)
    ok = ok and (info.preperiod, info.period) == (0, 3)
    mixed = detect_period(constant(ActionTriple(math.pi, math.pi / 2, 0.0)),
                          constant(ActionTriple(2 * math.pi / 3, math.pi / 2,
                                                0.0)), 0.3, 1000)
    ok = ok and (mixed.preperiod, mixed.period) == (0, 6)
    irrational = constant(ActionTriple(1.0, math.pi / 2, 0.0))
    t0 = time.perf_counter()
    spec_call = detect_period(irrational, irrational, 0.3, 10 ** 4)
    elapsed = time.perf_counter() - t0
    wide = detect_period(irrational, irrational, 0.3, 2 * 10 ** 4)
    ok = (ok and not spec_call.is_periodic and not wide.is_periodic
          and elapsed < 5.0)
    report("9", ok,
           f"two-round environment cycle for all 16 benchmark pairs (least "
           f"period degenerates to 1 for C and Q self-play); R3 self-play "
           f"period 3; pi vs 2pi/3 period 6; theta = 1 rad self-play "
           f"aperiodic through 10^4 rounds in {elapsed:.2f}s (< 5s) and "
           f"through 2x10^4 rounds" + ("" if ok else f"; issues: {notes}"))


def test_criterion_10_stochastic_consistency():
    rng = np.random.default_rng(77)
    worst_z = 0.0
    for k in range(20):
        a = ActionTriple(rng.uniform(0, 2 * math.pi), rng.uniform(0, math.pi),
                         rng.uniform(0, 2 * math.pi))
        b = ActionTriple(rng.uniform(0, 2 * math.pi), rng.uniform(0, math.pi),
                         rng.uniform(0, 2 * math.pi))
        eps = rng.uniform(0, math.pi / 2)
        w = rng.uniform(0.1, 0.8)
        mv = markov_value(a, b, eps, GAME, w)
        mc = monte_carlo_payoff(constant(a), constant(b), eps, GAME, w,
                                MCConfig(10 ** 5, 5000 + k))
        for side in (0, 1):
            z = abs(mv[side] - mc.mean[side]) / max(mc.stderr[side], 1e-12)
            worst_z = max(worst_z, z)
    worst_gap = 0.0
    for pair in (("ALLD", "ALLD"), ("CTFT", "ALLD")):
        for eps in EPS_GRID:
            cmp = compare_models(STRATEGIES[pair[0]], STRATEGIES[pair[1]], eps,
                                 GAME, 0.6)
            assert cmp.basis_state_trace
            worst_gap = max(worst_gap, abs(cmp.difference[0]),
                            abs(cmp.difference[1]))
    ok = worst_z <= 3.0 and worst_gap < 1e-9
    report("10", ok,
           f"markov vs monte carlo (1e5 samples, 20 random constant pairs) "
           f"max |z| = {worst_z:.2f} (<= 3); basis-state traces model gap "
           f"{worst_gap:.1e} (< 1e-9)")


def _engine_r3_verdicts(pair: str, strategy_index: int, ws) -> list:
    out = []
    for w in ws:
        m = engine_meta_matrix(pair, float(w), 0.3, GAME)
        cls = classify_strict_ne(m)
        holds = (cls.verdict in (Verdict.FIRST, Verdict.BOTH)
                 if strategy_index == 0
                 else cls.verdict in (Verdict.SECOND, Verdict.BOTH))
        margin = cls.margins[strategy_index]
        out.append((holds, margin))
    return out


def test_criterion_11a_allc_allr3_inequalities():
    ws = np.linspace(0.0, 0.99, 101)
    mismatches = []
    for strategy, idx in (("ALLC", 0), ("ALLR3", 1)):
        engine = _engine_r3_verdicts("allc-allr3", idx, ws)
        for w, (holds, margin) in zip(ws, engine):
            if abs(margin) <= 1e-6:
                continue
            if analytic_condition("allc-allr3", strategy, float(w), 0.3,
                                  GAME) != holds:
                mismatches.append((strategy, round(float(w), 3)))
    report("11a", not mismatches,
           f"ALLC-vs-ALLR3 inequalities agree with engine verdicts on the "
           f"101-point w grid away from boundaries; mismatches: {mismatches}")


def test_criterion_11b_alld_allr3_inequalities():
    """Expected to fail: the analytic ALLD-vs-ALLR3 conditions presuppose
    the environment returning to |00> every third round, but a theta = pi
    gate only has a two-round cycle, so the joint cycle is six rounds with
    payoffs (T+3P)/4, (R+3S)/4, T, (R+3S)/4, (T+3P)/4, R for the defector.
    Against the engine matrices the cubic condition flips at w ~ 0.18 (not
    ~ 0.06) and the rotation side is never strict NE, contradicting both
    the quadratic condition and its w >= 1/3 sufficiency claim."""
    ws = np.linspace(0.0, 0.99, 101)
    mismatches = {"ALLD": [], "ALLR3": []}
    for strategy, idx in (("ALLD", 0), ("ALLR3", 1)):
        engine = _engine_r3_verdicts("alld-allr3", idx, ws)
        for w, (holds, margin) in zip(ws, engine):
            if abs(margin) <= 1e-6:
                continue
            if analytic_condition("alld-allr3", strategy, float(w), 0.3,
                                  GAME) != holds:
                mismatches[strategy].append(round(float(w), 3))
    sufficiency_ws = [w for w in ws if w >= 1 / 3]
    analytic_sufficient = all(
        analytic_condition("alld-allr3", "ALLR3", float(w), 0.3, GAME)
        for w in sufficiency_ws)
    engine_sufficient = all(
        classify_strict_ne(engine_meta_matrix("alld-allr3", float(w), 0.3,
                                              GAME)).verdict
        in (Verdict.SECOND, Verdict.BOTH)
        for w in sufficiency_ws)
    ok = not mismatches["ALLD"] and not mismatches["ALLR3"] and engine_sufficient
    report("11b", ok,
           f"ALLD-vs-ALLR3: cubic condition disagrees with engine verdicts at "
           f"{len(mismatches['ALLD'])}/101 grid points "
           f"(w in [{mismatches['ALLD'][0] if mismatches['ALLD'] else '-'}, "
           f"{mismatches['ALLD'][-1] if mismatches['ALLD'] else '-'}]), "
           f"quadratic condition at {len(mismatches['ALLR3'])}/101; the "
           f"inequality itself holds for all w >= 1/3 "
           f"({analytic_sufficient}) but the engine never makes ALLR3 "
           f"strict NE against ALLD ({engine_sufficient}); kept failing as "
           f"documentation of the inconsistency")
