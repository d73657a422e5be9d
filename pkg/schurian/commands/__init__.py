from schurian.commands import category, cohomology, grading, topology

COMMAND_GROUPS = [category, topology, cohomology, grading]
