from typing import Any, Dict, Mapping


def extract_call_metadata(arguments: Mapping[str, Any]) -> Dict[str, Any]:
    """
    Duck-typed metadata extraction from the bound arguments of an engine call.
    Avoids importing the algebra types so that this module stays import-cycle free.
    """
    metadata: Dict[str, Any] = {}

    for name, value in arguments.items():
        # Exchange matrices: size, arrow count, infinite-type arrows
        b = getattr(value, "b", None)
        d = getattr(value, "d", None)
        if isinstance(b, tuple) and isinstance(d, tuple):
            n = len(d)
            arrows = sum(1 for i in range(n) for j in range(n) if b[i][j] > 0)
            infinite = sum(
                1
                for i in range(n)
                for j in range(n)
                if b[i][j] > 0 and b[i][j] * -b[j][i] >= 4
            )
            metadata[name] = {"n": n, "arrows": arrows, "infinite_type_arrows": infinite}
            continue

        # Valued quivers
        weights = getattr(value, "weights", None)
        if isinstance(weights, tuple) and hasattr(value, "arrows"):
            metadata[name] = {"n": len(weights), "arrows": len(value.arrows)}
            continue

        # Search configuration
        if hasattr(value, "max_length") and hasattr(value, "max_red"):
            metadata[name] = {
                "max_length": value.max_length,
                "max_red": value.max_red,
                "prune_infinite_source": getattr(value, "prune_infinite_source", None),
                "prune_repetition": getattr(value, "prune_repetition", None),
                "jobs": getattr(value, "jobs", None),
            }
            continue

        # Mutation sequences and vertex paths
        if isinstance(value, (tuple, list)) and all(isinstance(x, int) for x in value):
            metadata[name] = {"length": len(value), "value": ",".join(str(x) for x in value)}
            continue

        if isinstance(value, (int, str, bool)):
            metadata[name] = value

    return metadata


def extract_result_metrics(result: Any) -> Dict[str, Any]:
    """
    Pulls a small summary out of an engine result: counts, class, sizes.
    """
    metrics: Dict[str, Any] = {}

    # Search results
    sequences = getattr(result, "sequences", None)
    if isinstance(sequences, tuple):
        metrics["count"] = len(sequences)
        for attr in ["nodes_visited", "truncated", "workers"]:
            val = getattr(result, attr, None)
            if val is not None:
                metrics[attr] = val
        return metrics

    # Exchange graph slices
    graph = getattr(result, "graph", None)
    if graph is not None and hasattr(graph, "number_of_nodes"):
        metrics["nodes"] = graph.number_of_nodes()
        metrics["edges"] = graph.number_of_edges()
        return metrics

    # Pull-backs and anything else carrying a sequence and a class
    seq = getattr(result, "sequence", None)
    if isinstance(seq, tuple):
        metrics["length"] = len(seq)
    cls = getattr(result, "sequence_class", None)
    if cls is not None:
        metrics["class"] = getattr(getattr(cls, "kind", None), "value", str(cls))

    # Tame contexts
    for attr in ["eta", "period", "delta"]:
        val = getattr(result, attr, None)
        if val is not None:
            metrics[attr] = list(val) if isinstance(val, tuple) else val

    # Rotation results come back as (ExchangeMatrix, sequence)
    if isinstance(result, tuple) and len(result) == 2 and isinstance(result[1], tuple):
        metrics["length"] = len(result[1])
        metrics["sequence"] = ",".join(str(x) for x in result[1])

    return metrics
