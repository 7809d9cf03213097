"""Weighted graph homomorphism numbers as features for invariant and
equivariant graph functions, with step-graphon densities and cut norms."""

from homgraph.estimators import EquivariantHomRegressor, HomFeaturizer, HomRegressor
from homgraph.exceptions import CapExceededError, FormatError, HomGraphError
from homgraph.graph import (
    LabeledGraph,
    Permutation,
    WeightedGraph,
    edit_distance,
    l1_norm,
    labeled_edit_distance,
    permute,
    permute_labeled,
    shift,
)
from homgraph.graphon import StepGraphon, cut_distance, cut_norm, density, density_labeled
from homgraph.hom import hom, hom_brute, hom_exact, hom_labeled, hom_labeled_brute, hom_shifted
from homgraph.model import (
    Dataset,
    HomModel,
    featurize,
    featurize_labeled,
    fit,
    fit_equivariant,
    predict,
    predict_equivariant,
    separate,
    separate_labeled,
)
from homgraph.patterns import (
    LabeledPattern,
    Pattern,
    canonical_form,
    disjoint_union,
    enumerate_labeled_patterns,
    enumerate_patterns,
    glued_union,
)
from homgraph.treedecomp import TreeDecomposition, tree_decomposition

__version__ = "0.1.0"
