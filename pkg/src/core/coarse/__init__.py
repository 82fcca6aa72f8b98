# Joint2Coarse : espace latent des déformations du proxy et encodeur de mouvement
from .networks import MotionEncoder, ShapeCodec, decode_shape, encode_motion, encode_shape
from .normalizer import CoarseNormalizer
from .predictor import CoarseModel, predict_coarse
from .trainer import CoarseDataset, train_codec, train_motion_encoder

__all__ = [
    "CoarseDataset",
    "CoarseModel",
    "CoarseNormalizer",
    "MotionEncoder",
    "ShapeCodec",
    "decode_shape",
    "encode_motion",
    "encode_shape",
    "predict_coarse",
    "train_codec",
    "train_motion_encoder",
]
