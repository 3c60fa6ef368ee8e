"""Tiny independent Buchberger used as an oracle: no pair criteria, no heap,
plain exact division.  Only meant for small inputs."""

from dynext import Polynomial


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _reduce(f, basis):
    ring = f.ring
    work = f
    remainder = ring.zero()
    while work:
        lead = work.lead_exps()
        for g in basis:
            if _divides(g.lead_exps(), lead):
                shift = tuple(a - b for a, b in zip(lead, g.lead_exps()))
                work = work - g.mul_term(work.lead_coeff() / g.lead_coeff(), shift)
                break
        else:
            head = ring.monomial(lead, work.lead_coeff())
            remainder = remainder + head
            work = work - head
    return remainder


def _spoly(f, g):
    lf, lg = f.lead_exps(), g.lead_exps()
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    return (f.mul_term(1 / f.lead_coeff(), tuple(a - b for a, b in zip(lcm, lf)))
            - g.mul_term(1 / g.lead_coeff(), tuple(a - b for a, b in zip(lcm, lg))))


def naive_reduced_basis(generators):
    basis = [g for g in generators if g]
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                r = _reduce(_spoly(basis[i], basis[j]), basis)
                if r:
                    basis.append(r)
                    changed = True
        if changed:
            continue
    # minimalize and tail-reduce
    minimal = [g for i, g in enumerate(basis)
               if not any(j != i and _divides(basis[j].lead_exps(), g.lead_exps())
                          for j in range(len(basis)))]
    # drop duplicates by leading monomial (keep the first)
    seen = set()
    unique = []
    for g in minimal:
        if g.lead_exps() not in seen:
            seen.add(g.lead_exps())
            unique.append(g)
    out = []
    for i, g in enumerate(unique):
        others = [h for j, h in enumerate(unique) if j != i]
        out.append(_reduce(g, others).canonical() if others else g.canonical())
    out.sort(key=lambda p: p.ring.order.key(p.lead_exps()), reverse=True)
    return out
