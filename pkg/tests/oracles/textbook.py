"""Direct recursive forcing over full up-sets, for cross-checking the fast evaluator."""
from heyting.formula import Kind


def upset(model, a):
    seen, stack = {a}, [a]
    while stack:
        for b in model.succ[stack.pop()]:
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


def forces(model, a, f):
    k = f.kind
    if k is Kind.BOT:
        return False
    if k is Kind.TOP:
        return True
    if k is Kind.ATOM:
        return bool(model.valuations[a] >> (f.atom - 1) & 1)
    if k is Kind.AND:
        return forces(model, a, f.left) and forces(model, a, f.right)
    if k is Kind.OR:
        return forces(model, a, f.left) or forces(model, a, f.right)
    return all(not forces(model, b, f.left) or forces(model, b, f.right) for b in upset(model, a))
