"""Provides network level compression"""

from expand_nets.network.network_graph import NetworkGraph
from expand_nets.network.network_layer import Layer
from expand_nets.utils.errors import CompressionError
from expand_nets.utils.logger import logger
from .compression_compose import collapse_unit


def compress_network(expanded: NetworkGraph) -> NetworkGraph:
    """Collapses every expansion unit back into its original layer, other layers are copied.
    The result keeps the expansion provenance but has no units."""
    if not expanded.units:
        raise CompressionError(f"Network {expanded.name} has no expansion units to compress")

    units = {x.start: x for x in expanded.units}
    layers: list[Layer] = []
    i = 0
    while i < len(expanded.layers):
        unit = units.get(i)
        if unit is None:
            layers.append(expanded.layers[i].create_copy())
            i += 1
            continue
        collapsed = collapse_unit(unit, expanded.layers[unit.start:unit.stop])
        logger().debug("Collapsed %s into %s", unit, collapsed)
        layers.append(collapsed)
        i = unit.stop

    name = expanded.expansion.get("source_name", expanded.name) if expanded.expansion else expanded.name
    result = NetworkGraph(name, expanded.input_shape, expanded.num_classes, layers, None, expanded.expansion)
    logger().info("Compressed %s into %s, parameters %d -> %d", expanded.name, name,
                  expanded.param_count(), result.param_count())
    return result
