from .CsbModel import CsbModel
from .csf import fit, fit_wall_time_by_dimension, scaling_slope, path_hash
from .store import save_model, load_model
