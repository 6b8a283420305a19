import json
import logging
from pathlib import Path
import numpy as np

from errors import ConfigError
from graph import Dag
from data import read_f32, write_f32
from bridges import DiffusionSchedule, bridge_from_bundle
from .CsbModel import CsbModel

logger = logging.getLogger(__name__)

MODEL_FILE = 'model.json'


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def save_model(model: CsbModel, directory) -> Path:
    """
    Write model.json (graph, layers, schedule, metadata, bridge manifests) and one
    float32 CSBD file per tensor, its shape recorded in the manifest.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    bridges = []
    for i, bridge in enumerate(model.bridges):
        meta, arrays = bridge.to_bundle()
        manifest = {}
        for name, arr in arrays.items():
            arr = np.asarray(arr)
            fname = f'node{i}_{name}.f32'
            write_f32(directory / fname, arr if arr.ndim else arr.reshape(1))
            manifest[name] = {'file': fname, 'shape': list(arr.shape)}
        bridges.append({**meta, 'weights': manifest})

    doc = {
        'dag': {
            'node_count': model.dag.node_count,
            'edges': [list(e) for e in model.dag.edges],
            'node_names': list(model.dag.names),
        },
        'widths': model.widths,
        'layers': model.layers,
        'names': list(model.column_names),
        'schedule': {'sigma': model.schedule.sigma, 'kind': model.schedule.kind},
        'metadata': model.metadata,
        'bridges': bridges,
    }
    (directory / MODEL_FILE).write_text(json.dumps(_jsonable(doc), indent=2))
    logger.info('saved model with %d bridges to %s', len(bridges), directory)
    return directory


def load_model(directory) -> CsbModel:
    directory = Path(directory)
    path = directory / MODEL_FILE
    if not path.exists():
        raise FileNotFoundError(f'No {MODEL_FILE} in {directory}.')
    try:
        doc = json.loads(path.read_text())
        dag = Dag(doc['dag']['node_count'], tuple(tuple(e) for e in doc['dag']['edges']),
                  tuple(doc['dag']['node_names']))
        schedule = DiffusionSchedule(doc['schedule']['sigma'], doc['schedule']['kind'])
        bridges = []
        for meta in doc['bridges']:
            arrays = {
                name: read_f32(directory / entry['file']).reshape(entry['shape'])
                for name, entry in meta['weights'].items()
            }
            bridges.append(bridge_from_bundle(meta, arrays, schedule))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ConfigError(f'{path}: malformed model file ({exc}).') from exc
    return CsbModel(dag, bridges, schedule, doc['widths'], [list(l) for l in doc['layers']],
                    doc.get('metadata'), doc.get('names'))
