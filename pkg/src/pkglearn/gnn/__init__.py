"""From-scratch differentiable graph models and their training loop."""

from .classifier import PKGClassifier
from .layers import (
    BasisDecomp,
    GatConvParams,
    SageConvParams,
    gat_backward,
    gat_forward,
    gat_layer,
    sage_backward,
    sage_forward,
    sage_layer,
)
from .model import (
    GraphBatch,
    LinearParams,
    ModelParams,
    backward,
    bce_loss,
    forward_batch,
    init_params,
    load_checkpoint,
    make_batch,
    model_forward,
    predict_proba,
    save_checkpoint,
)
from .optim import AdamState, adam_step
from .train import EpochStats, TrainConfig, train, write_history

__all__ = [
    "AdamState", "BasisDecomp", "EpochStats", "GatConvParams", "GraphBatch",
    "LinearParams", "ModelParams", "PKGClassifier", "SageConvParams",
    "TrainConfig", "adam_step", "backward", "bce_loss", "forward_batch",
    "gat_backward", "gat_forward", "gat_layer", "init_params",
    "load_checkpoint", "make_batch", "model_forward", "predict_proba",
    "sage_backward", "sage_forward", "sage_layer", "save_checkpoint",
    "train", "write_history",
]
