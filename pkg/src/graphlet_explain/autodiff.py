"""Reverse-mode automatic differentiation over dense float64 arrays.

Small on purpose: just the tensor ops the graph classifier and the
frequency surrogate need (dense and constant-sparse matmul, bias add,
ReLU, column concat, row softmax, the two losses) plus Adam and a finite
difference gradient checker. Gradients are exact float64; constants that
do not require gradients never enter the graph, so detaching a value is
just wrapping its array in a fresh Tensor.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Tensor",
    "parameter",
    "matmul",
    "spmm",
    "add",
    "sub",
    "relu",
    "concat_cols",
    "softmax",
    "mse",
    "cross_entropy_logits",
    "scale",
    "Adam",
    "grad_check",
]


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_grad_fn")

    def __init__(self, data, requires_grad: bool = False):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self.requires_grad = requires_grad
        self._parents: tuple = ()
        self._grad_fn = None

    @property
    def shape(self):
        return self.data.shape

    def item(self) -> float:
        return float(self.data)

    def backward(self) -> None:
        """Accumulate gradients of this scalar into every reachable param."""
        if self.data.size != 1:
            raise ValueError("backward() requires a scalar output")
        topo: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                topo.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if p.requires_grad:
                    stack.append((p, False))
        self.grad = np.ones_like(self.data)
        for node in reversed(topo):
            if node._grad_fn is None:
                continue
            for parent, g in zip(node._parents, node._grad_fn(node.grad)):
                if g is None or not parent.requires_grad:
                    continue
                if parent.grad is None:
                    parent.grad = np.zeros_like(parent.data)
                parent.grad += g


def parameter(data, rng: np.random.Generator | None = None, fan_in: int | None = None) -> Tensor:
    """A trainable leaf; with ``rng`` and ``fan_in``, uniform init in
    [-1/sqrt(fan_in), 1/sqrt(fan_in)] over the given shape."""
    if rng is not None:
        scale_ = 1.0 / np.sqrt(fan_in)
        data = rng.uniform(-scale_, scale_, size=data)
    return Tensor(np.array(data, dtype=np.float64), requires_grad=True)


def _wrap(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _make(data, parents, grad_fn) -> Tensor:
    out = Tensor(data)
    if any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = tuple(parents)
        out._grad_fn = grad_fn
    return out


def _unbroadcast(g: np.ndarray, shape: tuple) -> np.ndarray:
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for ax, s in enumerate(shape):
        if s == 1 and g.shape[ax] != 1:
            g = g.sum(axis=ax, keepdims=True)
    return g


def matmul(a, b) -> Tensor:
    a, b = _wrap(a), _wrap(b)

    def grad_fn(g):
        return (
            g @ b.data.T if a.requires_grad else None,
            a.data.T @ g if b.requires_grad else None,
        )

    return _make(a.data @ b.data, (a, b), grad_fn)


def spmm(a_sparse, a_sparse_t, x) -> Tensor:
    """Constant sparse matrix times tensor; ``a_sparse_t`` is the
    precomputed transpose used on the backward pass."""
    x = _wrap(x)

    def grad_fn(g):
        return (a_sparse_t @ g,)

    return _make(a_sparse @ x.data, (x,), grad_fn)


def add(a, b) -> Tensor:
    a, b = _wrap(a), _wrap(b)

    def grad_fn(g):
        return (
            _unbroadcast(g, a.data.shape) if a.requires_grad else None,
            _unbroadcast(g, b.data.shape) if b.requires_grad else None,
        )

    return _make(a.data + b.data, (a, b), grad_fn)


def sub(a, b) -> Tensor:
    a, b = _wrap(a), _wrap(b)

    def grad_fn(g):
        return (
            _unbroadcast(g, a.data.shape) if a.requires_grad else None,
            _unbroadcast(-g, b.data.shape) if b.requires_grad else None,
        )

    return _make(a.data - b.data, (a, b), grad_fn)


def scale(x, c: float) -> Tensor:
    x = _wrap(x)

    def grad_fn(g):
        return (g * c,)

    return _make(x.data * c, (x,), grad_fn)


def relu(x) -> Tensor:
    x = _wrap(x)
    mask = x.data > 0

    def grad_fn(g):
        return (g * mask,)

    return _make(x.data * mask, (x,), grad_fn)


def concat_cols(xs) -> Tensor:
    xs = [_wrap(x) for x in xs]
    widths = [x.data.shape[1] for x in xs]
    splits = np.cumsum(widths)[:-1]

    def grad_fn(g):
        parts = np.split(g, splits, axis=1)
        return tuple(p if x.requires_grad else None for p, x in zip(parts, xs))

    return _make(np.concatenate([x.data for x in xs], axis=1), xs, grad_fn)


def _softmax_rows(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def softmax(x) -> Tensor:
    x = _wrap(x)
    p = _softmax_rows(x.data)

    def grad_fn(g):
        dot = (g * p).sum(axis=1, keepdims=True)
        return (p * (g - dot),)

    return _make(p, (x,), grad_fn)


def mse(a, b) -> Tensor:
    """Mean of squared entrywise differences (scalar)."""
    a, b = _wrap(a), _wrap(b)
    diff = a.data - b.data
    n = diff.size

    def grad_fn(g):
        base = (2.0 / n) * diff * g
        return (
            base if a.requires_grad else None,
            -base if b.requires_grad else None,
        )

    return _make(np.array(np.mean(diff * diff)), (a, b), grad_fn)


def cross_entropy_logits(logits, onehot) -> Tensor:
    """Mean cross-entropy of row softmax against one-hot targets."""
    logits = _wrap(logits)
    y = np.asarray(onehot, dtype=np.float64)
    p = _softmax_rows(logits.data)
    n = logits.data.shape[0]
    eps = 1e-300
    loss = -np.sum(y * np.log(p + eps)) / n

    def grad_fn(g):
        return ((p - y) * (g / n),)

    return _make(np.array(loss), (logits,), grad_fn)


class Adam:
    """Standard Adam with bias correction over a fixed parameter list."""

    def __init__(self, params, lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.params = list(params)
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self._m = [np.zeros_like(p.data) for p in self.params]
        self._v = [np.zeros_like(p.data) for p in self.params]

    def zero_grad(self) -> None:
        for p in self.params:
            p.grad = None

    def step(self) -> None:
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        for p, m, v in zip(self.params, self._m, self._v):
            if p.grad is None:
                continue
            g = p.grad
            m *= self.beta1
            m += (1 - self.beta1) * g
            v *= self.beta2
            v += (1 - self.beta2) * g * g
            p.data -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def grad_check(loss_fn, params, n_checks: int = 120, h: float = 1e-5, seed: int = 0) -> float:
    """Max relative error between backprop and central finite differences.

    ``loss_fn`` must rebuild the graph and return a scalar Tensor each
    call. Checks ``n_checks`` randomly chosen scalar parameters.
    """
    params = list(params)
    for p in params:
        p.grad = None
    loss_fn().backward()
    analytic = [p.grad.copy() if p.grad is not None else np.zeros_like(p.data) for p in params]

    sizes = [p.data.size for p in params]
    offsets = np.cumsum([0] + sizes)
    total = offsets[-1]
    rng = np.random.default_rng(seed)
    picks = rng.choice(total, size=min(n_checks, total), replace=False)

    max_rel = 0.0
    for flat in picks:
        pi = int(np.searchsorted(offsets, flat, side="right") - 1)
        i = int(flat - offsets[pi])
        p = params[pi]
        orig = p.data.flat[i]
        p.data.flat[i] = orig + h
        f_plus = loss_fn().item()
        p.data.flat[i] = orig - h
        f_minus = loss_fn().item()
        p.data.flat[i] = orig
        numeric = (f_plus - f_minus) / (2 * h)
        exact = float(analytic[pi].flat[i])
        rel = abs(numeric - exact) / max(abs(numeric) + abs(exact), 1e-8)
        max_rel = max(max_rel, rel)
    return max_rel
