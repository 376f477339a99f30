from surface_loss.constants import INTERFACE_ORDER

"""

output.py

This script holds general output functions used for console summaries of the surface loss commands.

This script holds the following function(s):
stringify_sensitivities(vectors, padding="")
stringify_design_sensitivity(design_sensitivity, padding="")
stringify_ensemble(ensemble, padding="")
stringify_frequency_groups(groups, padding="")

"""


def stringify_sensitivities(vectors, padding=""):
    width = max([len("design")] + [len(vector.design) for vector in vectors])
    header = padding + "design".ljust(width) + "".join(f"  {'r_' + interface + ' (1/m)':>16}" for interface in INTERFACE_ORDER)
    lines = [header]
    for vector in vectors:
        line = padding + vector.design.ljust(width)
        for interface in INTERFACE_ORDER:
            line += f"  {vector.r[interface]:>16.6g}"
        if not vector.reliable:
            line += "  (unreliable extrapolation)"
        lines.append(line)
    return "\n".join(lines)


def stringify_design_sensitivity(design_sensitivity, padding=""):
    string = design_sensitivity.vector.stringify(padding)
    for report in design_sensitivity.reports:
        string += "\n" + padding + "Section: {} (levels {}, reliable: {})".format(
            report.name, report.levels, report.reliable
        )
        if report.capacitance_pul is not None:
            string += "\n" + padding + "\tCapacitance (F/m): {:.6g}".format(report.capacitance_pul)
    return string


def stringify_ensemble(ensemble, padding=""):
    string = padding + "Devices: {}\n" + padding + "Designs: {}\n" + padding + "Wafers: {}"
    return string.format(len(ensemble), ", ".join(ensemble.designs), ", ".join(ensemble.wafers))


def stringify_frequency_groups(groups, padding=""):
    lines = []
    for group in groups:
        lines.append(
            padding
            + "{}: {:.6g} GHz, {} device(s), mean Q {:.6g}, mean T1 {:.6g} us".format(
                group.design, group.frequency * 1e-9, group.devices, group.mean_q, group.mean_t1 * 1e6
            )
        )
    return "\n".join(lines)
