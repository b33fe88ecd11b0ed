"""Lower-bound reductions: gadgets, dataset-to-stream transformations, verifiers, decoders."""

from __future__ import annotations

import numpy as np

from .constructions import (InnerProductInstance, MarginalsInstance, ReductionOutput, SequenceBuilder,
                            SubmatrixInstance, innerproduct_to_f, lift_reduction, lift_tau,
                            marginals_to_edgecount, marginals_to_f, marginals_to_triangles,
                            output_determined_variant, pad, pair_nodes, submatrix_to_triangles,
                            submatrix_to_triangles_bounded)
from .gadgets import (Gadget, GadgetError, builtin_gadgets, cc_gadget, convert_2edge_to_1edge,
                      mm_gadget, neg_d1_gadget, verify_gadget)
from .verify import ReductionReport, decode_answers, neighbor_relation_holds, verify_reduction

# Y and queries from the worked figures of the submatrix reduction
FIGURE_Y = np.array([[1, 0, 1, 0],
                     [1, 1, 0, 0],
                     [0, 0, 0, 1],
                     [1, 1, 1, 0]])
FIGURE_A = np.array([0, 0, 1, 0])
FIGURE_B = np.array([0, 1, 0, 1])


def figure_instance(w: int = 5, block=None) -> SubmatrixInstance:
    return SubmatrixInstance(FIGURE_Y, [(FIGURE_A, FIGURE_B)], w, block)


def worked_example_instance(w: int = 2) -> SubmatrixInstance:
    Y = np.array([[1, 0, 1], [0, 0, 1], [1, 1, 1]])
    return SubmatrixInstance(Y, [(np.array([1, 0, 1]), np.array([1, 1, 0]))], w)


__all__ = [
    "FIGURE_A", "FIGURE_B", "FIGURE_Y", "Gadget", "GadgetError", "InnerProductInstance",
    "MarginalsInstance", "ReductionOutput", "ReductionReport", "SequenceBuilder",
    "SubmatrixInstance", "builtin_gadgets", "cc_gadget", "convert_2edge_to_1edge",
    "decode_answers", "figure_instance", "innerproduct_to_f", "lift_reduction", "lift_tau",
    "marginals_to_edgecount", "marginals_to_f", "marginals_to_triangles", "mm_gadget",
    "neg_d1_gadget", "neighbor_relation_holds", "output_determined_variant", "pad",
    "pair_nodes", "submatrix_to_triangles", "submatrix_to_triangles_bounded", "verify_gadget",
    "verify_reduction", "worked_example_instance",
]
