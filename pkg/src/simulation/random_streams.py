"""
Flujos aleatorios basados en contador (Philox)

Cada flujo queda identificado por (semilla raíz, propósito, generación, grupo)
y no depende del orden de ejecución. Dentro del flujo de tokens de una
generación, el learner j del grupo consume exactamente las filas
[j * n * 3, (j + 1) * n * 3) de la secuencia, de modo que su subflujo es fijo
aunque los learners se repartan entre varios workers.
"""

import numpy as np

STREAM_INIT = 0
STREAM_TOKENS = 1
STREAM_WEIGHTS = 2
STREAM_REPLICATE = 3

# Por token: cruce de grupo, elección de maestro, ruido de producción
DRAWS_PER_TOKEN = 3

_U_EPS = 1e-16


def substream(seed: int, purpose: int, generation: int = 0, group_code: int = 0) -> np.random.Generator:
    """Generador Philox para la clave (seed, purpose, generation, group_code)"""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(purpose), int(generation), int(group_code)))
    return np.random.Generator(np.random.Philox(seq))


def token_draws(seed: int, generation: int, group_code: int, learners: int, n: int) -> np.ndarray:
    """
    Uniformes para todos los tokens de un grupo en una generación

    Returns:
        Array (learners, n, 3); la fila j es el subflujo del learner j
    """
    rng = substream(seed, STREAM_TOKENS, generation, group_code)
    return rng.random((learners, n, DRAWS_PER_TOKEN))


def open_uniform(u):
    """Lleva u de [0, 1) a (0, 1) para poder aplicar la inversa de la normal"""
    return np.clip(u, _U_EPS, 1.0 - _U_EPS)


def replicate_seed(seed: int, replicate: int) -> int:
    """La réplica 0 usa la semilla raíz; las demás derivan una semilla propia"""
    if replicate == 0:
        return int(seed)
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(STREAM_REPLICATE, int(replicate)))
    return int(seq.generate_state(1, dtype=np.uint32)[0])
