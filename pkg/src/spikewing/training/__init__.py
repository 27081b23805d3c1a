from .losses import huber, pearson, loss_estimator, loss_controller
from .bptt import TrainableSpikingNet, surrogate_grad, init_spiking_net
from .ann import TrainableAnnNet, init_ann_net, ann_forward
from .optim import Adam
from .dataset import (ScaledDataset, scale, unscale, compute_scale,
                      estimator_features, controller_features,
                      controller_refs, window_dataset)
from .trainer import TrainConfig, TrainResult, train, to_runtime_subnet

__all__ = [
    "huber", "pearson", "loss_estimator", "loss_controller",
    "TrainableSpikingNet", "surrogate_grad", "init_spiking_net",
    "TrainableAnnNet", "init_ann_net", "ann_forward",
    "Adam",
    "ScaledDataset", "scale", "unscale", "compute_scale",
    "estimator_features", "controller_features", "controller_refs",
    "window_dataset",
    "TrainConfig", "TrainResult", "train", "to_runtime_subnet",
]
