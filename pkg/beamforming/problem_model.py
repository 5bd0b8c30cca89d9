# This file is part of oblique-beam, a solver for max-min-fair coordinated
# multicell multicast beamforming under per-base-station power constraints.
#
# license: GPLv2
#

# Standard library imports
from collections import namedtuple

# Third party imports (anything installed into the local Python environment)
import numpy as np

# Local application imports (anything from oblique-beam)
# (none yet)

# field names of the JSON instance schema, also used in validation messages
FIELD_L = 'L'
FIELD_K = 'K'
FIELD_M = 'M'
FIELD_CHANNELS = 'channels'
FIELD_NOISE_POWER = 'noise_power'
FIELD_TARGETS = 'targets'
FIELD_BUDGETS = 'budgets'

# slack of the per-BS power feasibility checks
POWER_TOL = 1e-9

PhysicalBeamformers = namedtuple('PhysicalBeamformers', ('beamformers', 'used_power'))
PhysicalBeamformers.__doc__ = """
Beamformers of the original problem: 'beamformers' is an M x L array whose
column l is the beamformer of BS l, 'used_power' holds ||w_l||^2 per BS.
"""


class InstanceValidationError(Exception):
    """
    Exception to be raised when a network instance violates its invariants.
    The attribute 'field' names the offending field of the instance.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


def _check_positive_finite(values, field):
    if not np.all(np.isfinite(values)):
        raise InstanceValidationError(field, "all entries must be finite")
    if not np.all(values > 0):
        raise InstanceValidationError(field, "all entries must be strictly positive")


class NetworkInstance:
    """
    Raw physical problem: channels h~_{j,l,k} from BS j to user k of cell l,
    noise powers sigma^2_{l,k}, per-cell SINR targets Gamma_l and per-BS power
    budgets P_l (linear scale).

    The channel tensor is stored densely with shape (L, L, K, M) and indexed
    [j, l, k, :].
    """

    def __init__(self, channels, noise_power, targets, budgets):
        """
        NetworkInstance constructor, validates all invariants

        Args:
            channels (array_like): complex array of shape (L, L, K, M)
            noise_power (array_like): array of shape (L, K)
            targets (array_like): array of shape (L,)
            budgets (array_like): array of shape (L,)

        Raises:
            InstanceValidationError: if shapes or values are invalid
        """
        channels = np.array(channels, dtype=complex)
        if channels.ndim != 4:
            raise InstanceValidationError(FIELD_CHANNELS, "expected an array indexed [j][l][k][m]")
        L, L2, K, M = channels.shape
        if L < 1 or K < 1 or M < 1:
            raise InstanceValidationError(FIELD_CHANNELS, f"L, K and M must be >= 1, got {L}, {K}, {M}")
        if L2 != L:
            raise InstanceValidationError(FIELD_CHANNELS, f"expected {L} x {L} BS/cell pairs, got {L} x {L2}")
        if not np.all(np.isfinite(channels)):
            raise InstanceValidationError(FIELD_CHANNELS, "all entries must be finite")

        noise_power = np.array(noise_power, dtype=float)
        if noise_power.shape != (L, K):
            raise InstanceValidationError(FIELD_NOISE_POWER, f"expected shape {(L, K)}, got {noise_power.shape}")
        _check_positive_finite(noise_power, FIELD_NOISE_POWER)

        targets = np.array(targets, dtype=float)
        if targets.shape != (L,):
            raise InstanceValidationError(FIELD_TARGETS, f"expected {L} entries, got shape {targets.shape}")
        _check_positive_finite(targets, FIELD_TARGETS)

        budgets = np.array(budgets, dtype=float)
        if budgets.shape != (L,):
            raise InstanceValidationError(FIELD_BUDGETS, f"expected {L} entries, got shape {budgets.shape}")
        _check_positive_finite(budgets, FIELD_BUDGETS)

        self.L, self.K, self.M = L, K, M
        self.channels = channels
        self.noise_power = noise_power
        self.targets = targets
        self.budgets = budgets
        for arr in (self.channels, self.noise_power, self.targets, self.budgets):
            arr.setflags(write=False)


class NormalizedProblem:
    """
    Sphere-lifted problem: augmented channels h_{j,l,k} in C^{M+1} (last entry
    0) with all power budgets and noise powers absorbed, plus targets Gamma_l.
    """

    def __init__(self, channels, targets):
        channels = np.array(channels, dtype=complex)
        self.L, _, self.K, M1 = channels.shape
        self.M = M1 - 1
        self.channels = channels
        self.targets = np.array(targets, dtype=float)
        self.channels.setflags(write=False)
        self.targets.setflags(write=False)

    @property
    def dim(self):
        """Row count M+1 of a beam matrix for this problem"""
        return self.M + 1

    def is_degenerate(self):
        """
        True if every serving channel h_{l,l,k} is identically zero, in which
        case no beam matrix achieves a positive SINR.
        """
        serving = self.channels[np.arange(self.L), np.arange(self.L)]
        return not np.any(serving)


def normalize(inst):
    """
    Lift the power constraints onto unit spheres:
    h_{j,l,k} = (sqrt(P_j) / sigma_{l,k}) [h~_{j,l,k}; 0].

    Args:
        inst (NetworkInstance): raw instance

    Returns:
        (NormalizedProblem): augmented problem of dimension M+1

    Raises:
        InstanceValidationError: if noise powers or budgets are non-finite or
            non-positive
    """
    _check_positive_finite(inst.noise_power, FIELD_NOISE_POWER)
    _check_positive_finite(inst.budgets, FIELD_BUDGETS)

    L, K, M = inst.L, inst.K, inst.M
    scale = np.sqrt(inst.budgets)[:, None, None] / np.sqrt(inst.noise_power)[None, :, :]
    channels = np.zeros((L, L, K, M + 1), dtype=complex)
    channels[..., :M] = scale[..., None] * inst.channels
    return NormalizedProblem(channels, inst.targets.copy())


def denormalize(prob, W, budgets):
    """
    Map a beam matrix back to physical beamformers, w~_l = sqrt(P_l) w_l[:M].

    Args:
        prob (NormalizedProblem): normalized problem W belongs to
        W (ndarray): beam matrix of shape (M+1, L) with unit-norm columns
        budgets (array_like): power budgets P_l

    Returns:
        (PhysicalBeamformers): beamformers and their used power

    Raises:
        ValueError: on shape mismatch
    """
    W = np.asarray(W)
    budgets = np.asarray(budgets, dtype=float)
    if W.shape != (prob.dim, prob.L) or budgets.shape != (prob.L,):
        raise ValueError(f"expected W of shape {(prob.dim, prob.L)} and {prob.L} budgets, "
                         f"got {W.shape} and {budgets.shape}")
    beamformers = np.sqrt(budgets)[None, :] * W[:prob.M, :]
    used_power = np.sum(np.abs(beamformers) ** 2, axis=0)
    return PhysicalBeamformers(beamformers, used_power)


def _interference_mask(L):
    return ~np.eye(L, dtype=bool)[:, :, None]


def channel_projections(prob, W):
    """
    Returns p[j, l, k] = h_{j,l,k}^H w_j for all BS/user pairs
    """
    return np.einsum('jlkm,mj->jlk', prob.channels.conj(), W)


def channel_gains(prob, W):
    """
    Returns g[j, l, k] = |h_{j,l,k}^H w_j|^2 for all BS/user pairs
    """
    return np.abs(channel_projections(prob, W)) ** 2


def split_gains(gains):
    """
    Split a gain tensor g[j, l, k] into the serving signal power g[l, l, k]
    and the interference sum_{j != l} g[j, l, k], both of shape (L, K).
    """
    L = gains.shape[0]
    idx = np.arange(L)
    signal = gains[idx, idx]
    interference = np.sum(np.where(_interference_mask(L), gains, 0.0), axis=0)
    return signal, interference


def signal_and_interference(prob, W):
    """
    Serving signal power |h_{l,l,k}^H w_l|^2 and interference
    sum_{j != l} |h_{j,l,k}^H w_j|^2 of every user, both of shape (L, K).
    """
    return split_gains(channel_gains(prob, W))


def sinr_table(prob, W):
    """
    Per-user weighted SINR (1/Gamma_l) |h_{l,l,k}^H w_l|^2 / (interference + 1)

    Args:
        prob (NormalizedProblem): normalized problem
        W (ndarray): beam matrix on the oblique manifold

    Returns:
        (ndarray): table of shape (L, K)
    """
    signal, interference = signal_and_interference(prob, W)
    return signal / prob.targets[:, None] / (interference + 1.0)


def worst_user(prob, W):
    """
    Returns the (l, k) pair attaining the minimum weighted SINR, the
    lexicographically smallest pair on ties.
    """
    table = sinr_table(prob, W)
    # argmin on the row-major flattening returns the first minimum
    flat = int(np.argmin(table))
    return divmod(flat, prob.K)


def sinr_min(prob, W):
    """
    Minimum weighted SINR over all users, SINR(W) >= 0
    """
    return float(np.min(sinr_table(prob, W)))


def margin(prob, W, t):
    """
    Received power shortage or redundancy of every user for SINR level t.

    Args:
        prob (NormalizedProblem): normalized problem
        W (ndarray): beam matrix on the oblique manifold
        t (float): SINR level, t >= 0

    Returns:
        tuple of 2 elements containing
        - value (float): F(W, t), the minimum over the table
        - per_user (ndarray): table f_{l,k}(W, t) of shape (L, K)
    """
    signal, interference = signal_and_interference(prob, W)
    per_user = signal / prob.targets[:, None] - t * (interference + 1.0)
    return float(np.min(per_user)), per_user


def physical_sinr_table(inst, beamformers):
    """
    Weighted SINR of every user evaluated directly on the raw instance, i.e.,
    (1/Gamma_l) |h~_{l,l,k}^H w~_l|^2 / (sum_{j != l} |h~_{j,l,k}^H w~_j|^2 + sigma^2_{l,k}).

    Args:
        inst (NetworkInstance): raw instance
        beamformers (ndarray): M x L array of physical beamformers

    Returns:
        (ndarray): table of shape (L, K)
    """
    L, K = inst.L, inst.K
    table = np.empty((L, K))
    for l in range(L):
        for k in range(K):
            signal = abs(np.vdot(inst.channels[l, l, k], beamformers[:, l])) ** 2
            interference = sum(abs(np.vdot(inst.channels[j, l, k], beamformers[:, j])) ** 2
                               for j in range(L) if j != l)
            table[l, k] = signal / inst.targets[l] / (interference + inst.noise_power[l, k])
    return table


def is_power_feasible(physical, budgets, tol=POWER_TOL):
    """
    Check the power budgets ||w~_l||^2 <= P_l + tol for every BS
    """
    return bool(np.all(physical.used_power <= np.asarray(budgets) + tol))
