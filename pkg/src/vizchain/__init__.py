"""Edge colouring with multi-step Vizing chains.

* :mod:`vizchain.graph` - graph store with colour-indexed incidence.
* :mod:`vizchain.chains` - fans, bichromatic paths, (multi-step) Vizing chains, shifting.
* :mod:`vizchain.strict_local` - static colouring with colour(uv) <= max(d(u), d(v)) + 1.
* :mod:`vizchain.palette`, :mod:`vizchain.dynamic` - fully dynamic (1+eps)Delta colouring.
* :mod:`vizchain.verify` - independent checks.
"""
from .chains import ChainError, ChainStatus, EpsLocal, Plain, StrictlyLocal
from .dynamic import DynamicColourer, EdgeClass, Params
from .graph import UNCOLOURED, ColouringError, Graph, GraphError
from .strict_local import colour_arrays, colour_graph, colour_graph_plain, potential_phi

__all__ = [
    "UNCOLOURED", "ChainError", "ChainStatus", "ColouringError", "DynamicColourer", "EdgeClass",
    "EpsLocal", "Graph", "GraphError", "Params", "Plain", "StrictlyLocal",
    "colour_arrays", "colour_graph", "colour_graph_plain", "potential_phi",
]
__version__ = "0.1.0"
