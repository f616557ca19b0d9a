"""Shared hand-built networks."""

import numpy as np

from mgear import FieldSpec, NetworkConfig, Position
from mgear.protocol import NetworkState
from mgear.topology import NodeRecord, euclidean_distance, node_data_table

# one node per region; BS threshold widened so (50, 100) is 25 m < 30 m from the BS
FOUR_NODE_FIELD = FieldSpec(d_threshold_bs=30.0)
FOUR_NODE_POINTS = [(50.0, 100.0), (53.0, 54.0), (10.0, 50.0), (90.0, 20.0)]

# Worked by hand from the radio constants, k = 4000 bits:
#   node 1, NearBS,  d_bs = 25: 4000*5e-9 + 10e-12*4000*625            = 4.5e-5
#   node 2, NearGW,  d_gw = 5:  2e-5 + 10e-12*4000*25                   = 2.1e-5
#   node 3, lone CH, d_gw = 40: fuse 1 signal 2e-8 + 2e-5 + 6.4e-5      = 8.402e-5
#   node 4, lone CH, d_gw = 50: fuse 1 signal 2e-8 + 2e-5 + 1.0e-4      = 1.2002e-4
FOUR_NODE_COSTS = {1: 4.5e-5, 2: 2.1e-5, 3: 8.402e-5, 4: 1.2002e-4}
FOUR_NODE_TOTAL = 2.7004e-4


def make_state(points, field=FOUR_NODE_FIELD, config=None, seed=0, backend=None, energy=0.5):
    config = config or NetworkConfig(n=len(points), field=field)
    records = []
    for i, (x, y) in enumerate(points):
        pos = Position(x, y)
        records.append(NodeRecord(i + 1, pos, energy, euclidean_distance(pos, field.bs_position),
                                  euclidean_distance(pos, field.gateway_position)))
    table = node_data_table(records, field)
    return NetworkState(config, table, np.random.default_rng(seed), backend=backend)
