"""Provides network level expansion and the nonlinear counterpart"""

from expand_nets.network.network_activation import LeakyReLU, ReLU
from expand_nets.network.network_conv2d import Conv2d
from expand_nets.network.network_graph import NetworkGraph
from expand_nets.network.network_layer import Layer
from expand_nets.network.network_linear import Linear
from expand_nets.utils.errors import ExpansionError
from expand_nets.utils.logger import logger
from expand_nets.utils.random_streams import StreamPurpose, random_stream
from .expansion_strategies import ck_depth, expand_ck, expand_cl, expand_fc
from .expansion_types import ExpansionDirective, ExpansionPlan, ExpansionStrategy, ExpansionUnit


def plan_for_variant(net: NetworkGraph, variant: str, rate: int, depth: int = 3, keep_input_channels: bool = False,
                     seed: int = 0) -> ExpansionPlan:
    """Creates plan for a variant like "CK+FC": convolutions get CL or CK, all fully-connected layers
    except the final logit layer get FC"""
    strategies = {ExpansionStrategy.from_label(x) for x in variant.split("+") if x} if variant else set()
    if {ExpansionStrategy.CL, ExpansionStrategy.CK}.issubset(strategies):
        raise ExpansionError(f"Variant {variant} combines CL and CK")
    directives: dict[int, ExpansionDirective] = {}
    linear_indices = [i for i, x in enumerate(net.layers) if isinstance(x, Linear)]
    for i, layer in enumerate(net.layers):
        if isinstance(layer, Conv2d):
            for conv_strategy in (ExpansionStrategy.CL, ExpansionStrategy.CK):
                if conv_strategy in strategies:
                    directives[i] = ExpansionDirective(conv_strategy)
        elif isinstance(layer, Linear) and ExpansionStrategy.FC in strategies and i != linear_indices[-1]:
            directives[i] = ExpansionDirective(ExpansionStrategy.FC, depth)
    plan = ExpansionPlan(rate, directives, keep_input_channels, seed)
    check_plan(net, plan)
    return plan


def check_plan(net: NetworkGraph, plan: ExpansionPlan):
    """Raises ExpansionError if a directive does not fit its layer"""
    if plan.rate < 1:
        raise ExpansionError(f"Expansion rate must be >= 1, got {plan.rate}")
    for index, directive in plan.directives.items():
        if not 0 <= index < len(net.layers):
            raise ExpansionError(f"Directive for layer {index} outside network with {len(net.layers)} layers")
        layer = net.layers[index]
        strategy = directive.strategy
        if strategy == ExpansionStrategy.FC and not isinstance(layer, Linear):
            raise ExpansionError(f"FC expansion needs a linear layer, layer {index} is {layer.kind.label}")
        if strategy in (ExpansionStrategy.CL, ExpansionStrategy.CK) and not isinstance(layer, Conv2d):
            raise ExpansionError(f"{strategy.label} expansion needs a conv2d layer, layer {index} is {layer.kind.label}")
        if strategy == ExpansionStrategy.CK:
            try:
                ck_depth(layer.kernel_size)
            except ExpansionError as e:
                raise ExpansionError(f"CK not applicable to layer {index}: {e}") from e
        if strategy == ExpansionStrategy.FC and directive.depth < 2:
            raise ExpansionError(f"FC expansion depth must be >= 2, got {directive.depth} for layer {index}")


def expand_network(net: NetworkGraph, plan: ExpansionPlan) -> NetworkGraph:
    """Replaces every directed layer by its expansion unit, other layers are copied unchanged.
    Unit layers get fresh parameters from a stream keyed by plan seed and original layer index."""
    if net.units:
        raise ExpansionError(f"Network {net.name} is already expanded")
    check_plan(net, plan)
    first_conv = next((i for i, x in enumerate(net.layers) if isinstance(x, Conv2d)), None)

    layers: list[Layer] = []
    units: list[ExpansionUnit] = []
    for i, layer in enumerate(net.layers):
        directive = plan.directives.get(i)
        if directive is None or directive.strategy == ExpansionStrategy.NONE:
            layers.append(layer.create_copy())
            continue

        rng = random_stream(plan.seed, StreamPurpose.LAYER_INIT, i)
        keep_input = plan.keep_input_channels and i == first_conv
        if directive.strategy == ExpansionStrategy.FC:
            chain = expand_fc(layer, plan.rate, directive.depth, rng)
        elif directive.strategy == ExpansionStrategy.CL:
            chain = expand_cl(layer, plan.rate, keep_input, rng)
        else:
            chain = expand_ck(layer, plan.rate, keep_input, rng)
        units.append(ExpansionUnit(layer.describe(), directive.strategy, len(layers), len(layers) + len(chain), plan.rate))
        layers.extend(chain)
        logger().debug("Expanded layer %d %s into %d layers (%s)", i, layer, len(chain), directive.strategy.label)

    if not units:
        return NetworkGraph(net.name, net.input_shape, net.num_classes, layers)

    name = f"{net.name}-expand-{plan.variant_name.lower()}-r{plan.rate}"
    provenance = {**plan.to_dict(), "source_name": net.name}
    result = NetworkGraph(name, net.input_shape, net.num_classes, layers, units, provenance)
    logger().info("Expanded %s into %s, parameters %d -> %d", net.name, name, net.param_count(), result.param_count())
    return result


def build_nonlinear_counterpart(expanded: NetworkGraph, slope: float | None = None) -> NetworkGraph:
    """Inserts an activation between consecutive layers inside each unit, ReLU by default or LeakyReLU
    with slope. Parameters are copied so they transfer one-to-one."""
    if not expanded.units:
        raise ExpansionError(f"Network {expanded.name} has no expansion units")
    interior = {i for unit in expanded.units for i in range(unit.start, unit.stop - 1)}

    layers: list[Layer] = []
    starts: dict[int, int] = {}
    stops: dict[int, int] = {}
    for i, layer in enumerate(expanded.layers):
        starts[i] = len(layers)
        layers.append(layer.create_copy())
        stops[i] = len(layers)
        if i in interior:
            layers.append(ReLU(dtype=layer.dtype) if slope is None else LeakyReLU(slope, dtype=layer.dtype))

    units = [x.shifted(starts[x.start], stops[x.stop - 1]) for x in expanded.units]
    return NetworkGraph(f"{expanded.name}-counterpart", expanded.input_shape, expanded.num_classes,
                        layers, units, expanded.expansion)
