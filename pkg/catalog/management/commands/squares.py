import logging

from django.core.management.base import BaseCommand, CommandError

from cosets.models import COSET_STRATEGIES
from automata.words import parse_word
from core.exceptions import InternalError
from complexes.models import ORIENTATIONS, MixedWord
from actions.controllers import ActionController
from cosets.controllers import CosetController
from catalog.controllers import CatalogController
from complexes.controllers import ComplexController
from residual.controllers import ResidualController
from automata.controllers import AutomatonController
from core.utils import Colors, style, titleize
from catalog.models import FORMATS, SYMMETRY_POLICIES
from residual.models import STRATEGIES, GeneratorMap
from catalog.experiments import ALL, EXPERIMENTS, reproduce, reproduce_all
from complexes.parsers import tiles_to_dot, tiles_to_text, render_rectangle
from automata.parsers import automaton_to_dot, link_graph_to_dot, serialize_automaton

logger = logging.getLogger(__name__)

AUTOMATON_COMMANDS = {
    "validate": "Parse an automaton and check its transition table",
    "dual": "Dual automaton (states and letters exchanged)",
    "inverse": "Inverse automaton",
    "bireversible": "Bireversibility, by the link graph and the eight derived automata",
    "family": "The eight automata derived by dual and inverse",
    "iso": "Isomorphism onto another automaton",
    "minimize": "Merge states defining the same transformation",
    "act": "Image of a letter word under a state word",
    "section": "Section of a state word at a letter word",
    "trivial": "Whether a state word acts trivially",
    "order": "Order of a state word",
    "orbit": "Orbit of a letter word",
    "transitive": "Level transitivity on reduced letter words",
    "group-order": "Size of the automaton group, or a lower bound",
    "replicate": "Replication certificate of infiniteness",
    "presentation": "Presentation of the fundamental group of the square complex",
    "nf": "Normal form of an element of the fundamental group",
    "pi1-trivial": "Whether an element of the fundamental group is trivial",
    "commutes": "Commutation matrix of the powers of two words",
    "tiling": "Commuting pair read off a periodic tiling",
    "rect": "Tiling of a rectangle",
    "tiles": "Squares of the complex as tiles",
    "abelianization": "Whether every relator vanishes in Z^2",
    "partition": "States fixing the positive letters, the negative letters, or neither",
    "exponent": "Least n with (y^-1 x)^n acting trivially on the states",
    "endo": "Endomorphism of the fundamental group",
    "verify-map": "Whether a generator map preserves the relators",
    "embed": "Subautomaton of a power automaton isomorphic to the automaton",
    "pm": "Letter pairs connected by m-th powers",
    "nrf": "Non-residual finiteness report",
}
PRESENTATION_COMMANDS = {
    "tc": "Coset table of a subgroup",
    "quotient": "Order of the quotient by the extra relators",
}


def cli_dispatch(argv, stdout=None, stderr=None) -> int:
    """Run `squares` as from the command line and return its exit code instead of exiting."""
    command = Command(stdout=stdout, stderr=stderr)
    try:
        command.run_from_argv(["manage.py", "squares", *argv])
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    return 0


class Command(BaseCommand):
    help = "Bireversible automata, their groups and their square complexes"
    requires_system_checks = []

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(title="commands", dest="command", required=True)
        parsers = {}
        for name, help_text in AUTOMATON_COMMANDS.items():
            parsers[name] = subparsers.add_parser(name, help=help_text)
            parsers[name].add_argument("--automaton", required=True, help="File, or bundled:NAME")
        for name, help_text in PRESENTATION_COMMANDS.items():
            parsers[name] = subparsers.add_parser(name, help=help_text)
            parsers[name].add_argument("--presentation", required=True, help="File, or bundled:NAME")
            parsers[name].add_argument("--max-cosets", type=int, help="Coset table cap")
            parsers[name].add_argument(
                "--strategy",
                choices=COSET_STRATEGIES.values(),
                default=COSET_STRATEGIES.FELSCH,
                help="; ".join(f"{v}: {d}" for v, d in COSET_STRATEGIES.items()),
            )
        parsers["enumerate"] = subparsers.add_parser("enumerate", help="Classify small bireversible automata")
        parsers["reproduce"] = subparsers.add_parser("reproduce", help="Run a bundled experiment")

        for name in ("validate", "dual", "inverse", "minimize", "tiles"):
            parsers[name].add_argument(
                "--format", dest="output_format", choices=FORMATS.values(), default=FORMATS.TEXT
            )
        parsers["validate"].add_argument("--link-graph", action="store_true", help="Export the link graph")
        parsers["iso"].add_argument("--target", required=True, help="File, or bundled:NAME")
        parsers["iso"].add_argument("--fix-alphabet", action="store_true")
        for name in ("act", "section", "trivial", "order", "nf", "pi1-trivial", "commutes", "rect"):
            parsers[name].add_argument("--word", required=True)
        for name in ("act", "section", "orbit", "rect"):
            parsers[name].add_argument("--letters", required=True, help="Letter word")
        parsers["order"].add_argument("--max", dest="cutoff", type=int, default=64)
        parsers["orbit"].add_argument("--generators", help="Comma separated state words, all states by default")
        parsers["orbit"].add_argument("--max-orbit", type=int)
        parsers["transitive"].add_argument("--max-level", type=int, default=5)
        for name in ("group-order", "nrf"):
            parsers[name].add_argument("--max-elements", type=int)
            parsers[name].add_argument("--seed", type=int)
        parsers["group-order"].add_argument("--max-length", type=int)
        parsers["replicate"].add_argument("--max-k", type=int)
        parsers["replicate"].add_argument("--max-m", type=int)
        parsers["nf"].add_argument("--orientation", choices=ORIENTATIONS.values(), default=ORIENTATIONS.LEFT)
        parsers["commutes"].add_argument("--other", required=True, help="Second word")
        parsers["commutes"].add_argument("--max-n", type=int, default=6)
        parsers["commutes"].add_argument("--max-m", type=int, default=6)
        parsers["tiles"].add_argument("--signed", action="store_true", help="Every square of the closure")
        for name in ("endo", "nrf"):
            parsers[name].add_argument(
                "--strategy", choices=STRATEGIES.values(), help="; ".join(f"{v}: {d}" for v, d in STRATEGIES.items())
            )
        parsers["verify-map"].add_argument(
            "--image", dest="images", action="append", default=[], help="NAME=WORD, repeatable"
        )
        parsers["embed"].add_argument("--depth", type=int, default=2)
        parsers["pm"].add_argument("--m", type=int, required=True)
        parsers["pm"].add_argument("--max-g-length", type=int)
        parsers["pm"].add_argument("--max-u-length", type=int)
        parsers["pm"].add_argument(
            "--unrestricted",
            action="store_true",
            help="Read pairs at every fixed prefix, not only below letter-fixing sections",
        )
        parsers["nrf"].add_argument("--citation", help="Reference for infiniteness, bundled citation by default")
        parsers["nrf"].add_argument("--corpus-size", type=int)
        parsers["tc"].add_argument(
            "--format", dest="output_format", choices=[FORMATS.TEXT, FORMATS.TSV], default=FORMATS.TEXT
        )
        parsers["tc"].add_argument("--extra", action="store_true", help="Add the extra relators")
        parsers["tc"].add_argument("--subgroup", action="store_true", help="Cosets of the file's subgroup")
        parsers["enumerate"].add_argument("--states", type=int, default=3)
        parsers["enumerate"].add_argument("--letters", type=int, default=2)
        parsers["enumerate"].add_argument("--vh4", action="store_true", help="One-vertex complexes with four squares")
        parsers["enumerate"].add_argument(
            "--policy",
            choices=SYMMETRY_POLICIES.values(),
            default=SYMMETRY_POLICIES.ISO,
            help="; ".join(f"{v}: {d}" for v, d in SYMMETRY_POLICIES.items()),
        )
        parsers["enumerate"].add_argument("--max-elements", type=int)
        parsers["reproduce"].add_argument("name", help=f"One of {', '.join(EXPERIMENTS)}, or {ALL}")

    def handle(self, *args, **options):
        command = options["command"]
        try:
            if "automaton" in options:
                options["automaton"] = CatalogController.load(options["automaton"])
            if "presentation" in options:
                options["presentation"] = CatalogController.load_presentation(options["presentation"])
            getattr(self, "handle_" + command.replace("-", "_"))(**options)
        except InternalError as e:
            logger.debug("%s failed", command, exc_info=True)
            raise CommandError(f"{e.code} {e}", returncode=2) from e

    def write(self, text):
        self.stdout.write(str(text), ending="" if str(text).endswith("\n") else "\n")

    def write_flag(self, value):
        self.write(str(bool(value)).lower())

    def write_automaton(self, automaton, output_format):
        if output_format == FORMATS.DOT:
            self.write(automaton_to_dot(automaton))
        elif output_format == FORMATS.TSV:
            self.write("".join("\t".join(str(sym) for sym in arrow) + "\n" for arrow in automaton.arrows))
        else:
            self.write(serialize_automaton(automaton))

    @staticmethod
    def states(automaton, text):
        return parse_word(text, automaton.resolve_state)

    @staticmethod
    def letters(automaton, text):
        return parse_word(text, automaton.resolve_letter)

    @staticmethod
    def mixed(automaton, text):
        return parse_word(text, automaton.resolve, cls=MixedWord)

    # Automata

    def handle_validate(self, automaton, output_format, link_graph, **options):
        if link_graph:
            self.write(link_graph_to_dot(automaton.link_graph))
        elif output_format == FORMATS.TEXT:
            signed = "signed" if automaton.signed else "directed"
            self.write(f"{automaton.name}: {len(automaton.states)} states, {len(automaton.alphabet)} letters, {signed}")
        else:
            self.write_automaton(automaton, output_format)

    def handle_dual(self, automaton, output_format, **options):
        self.write_automaton(AutomatonController.dual(automaton), output_format)

    def handle_inverse(self, automaton, output_format, **options):
        self.write_automaton(AutomatonController.inverse(automaton), output_format)

    def handle_bireversible(self, automaton, **options):
        self.write_flag(AutomatonController.is_bireversible(automaton))

    def handle_family(self, automaton, **options):
        family = AutomatonController.derived_family(automaton)
        for key, member in family.members.items():
            if member is None:
                self.write(f"{key}\t{family.failures[key].code}")
            else:
                self.write(f"{key}\t{len(member.states)} states\t{len(member.alphabet)} letters")

    def handle_iso(self, automaton, target, fix_alphabet, **options):
        isomorphism = AutomatonController.find_isomorphism(
            automaton, CatalogController.load(target), fix_alphabet=fix_alphabet
        )
        self.write(isomorphism if isomorphism else "none")

    def handle_minimize(self, automaton, output_format, **options):
        self.write_automaton(AutomatonController.minimize(automaton)[0], output_format)

    # Actions

    def handle_act(self, automaton, word, letters, **options):
        self.write(ActionController.act(automaton, self.states(automaton, word), self.letters(automaton, letters)))

    def handle_section(self, automaton, word, letters, **options):
        g, v = self.states(automaton, word), self.letters(automaton, letters)
        self.write(ActionController.section(automaton, g, v))

    def handle_trivial(self, automaton, word, **options):
        self.write_flag(ActionController.is_trivial(automaton, self.states(automaton, word)))

    def handle_order(self, automaton, word, cutoff, **options):
        self.write(ActionController.element_order(automaton, self.states(automaton, word), cutoff))

    def handle_orbit(self, automaton, letters, generators, max_orbit, **options):
        if generators is None:
            generators = ActionController.state_generators(automaton)
        else:
            generators = [self.states(automaton, text) for text in generators.split(",") if text.strip()]
        for w in ActionController.orbit(automaton, self.letters(automaton, letters), generators, cap=max_orbit):
            self.write(w)

    def handle_transitive(self, automaton, max_level, **options):
        for level, transitive in ActionController.is_level_transitive_reduced(automaton, max_level).items():
            self.write(f"{level}\t{str(transitive).lower()}")

    def handle_group_order(self, automaton, max_elements, max_length, seed, **options):
        self.write(
            ActionController.group_order(automaton, max_elements=max_elements, max_length=max_length, seed=seed)
        )

    def handle_replicate(self, automaton, max_k, max_m, **options):
        certificate = ActionController.replication_certificate(automaton, max_k=max_k, max_m=max_m)
        self.write(certificate if certificate else "none")

    # Square complexes

    def handle_presentation(self, automaton, **options):
        self.write(ComplexController.presentation(automaton))

    def handle_nf(self, automaton, word, orientation, **options):
        self.write(ComplexController.normal_form(automaton, self.mixed(automaton, word), orientation))

    def handle_pi1_trivial(self, automaton, word, **options):
        self.write_flag(ComplexController.pi1_is_trivial(automaton, self.mixed(automaton, word)))

    def handle_commutes(self, automaton, word, other, max_n, max_m, **options):
        report = ComplexController.commutes(
            automaton, self.mixed(automaton, word), self.mixed(automaton, other), max_n, max_m
        )
        self.write(report)
        for row in report.matrix:
            self.write(" ".join("1" if commute else "0" for commute in row))

    def handle_tiling(self, automaton, **options):
        w, u = ComplexController.periodic_tiling(automaton)
        self.write(f"{w}\t{u}")

    def handle_rect(self, automaton, word, letters, **options):
        rectangle = ComplexController.tile_rectangle(
            automaton, self.states(automaton, word), self.letters(automaton, letters)
        )
        self.write(render_rectangle(rectangle))

    def handle_tiles(self, automaton, output_format, signed, **options):
        tiles = ComplexController.tileset_export(automaton, signed=signed)
        self.write(tiles_to_dot(automaton.name, tiles) if output_format == FORMATS.DOT else tiles_to_text(tiles))

    def handle_abelianization(self, automaton, **options):
        self.write_flag(ComplexController.abelianization_check(automaton))

    # Residual finiteness

    def handle_partition(self, automaton, **options):
        partition = ResidualController.stabilizer_partition(automaton)
        for key, states in partition._asdict().items():
            self.write(f"{key}\t{' '.join(str(s) for s in states)}")

    def handle_exponent(self, automaton, **options):
        self.write(ResidualController.dual_exponent(automaton))

    def handle_endo(self, automaton, strategy, **options):
        self.write(ResidualController.build_endomorphism(automaton, strategy))

    def handle_verify_map(self, automaton, images, **options):
        mapping = {}
        for item in images:
            name, separator, text = item.partition("=")
            if not separator:
                raise CommandError(f"--image expects NAME=WORD, got {item!r}", returncode=2)
            mapping[automaton.resolve(name.strip())] = self.mixed(automaton, text)
        relator = ResidualController.failing_relator(automaton, GeneratorMap(mapping))
        self.write("true" if relator is None else f"false\t{relator}")

    def handle_embed(self, automaton, depth, **options):
        embedding = ResidualController.subautomaton_embedding(automaton, depth)
        self.write(embedding if embedding else "none")

    def handle_pm(self, automaton, m, max_g_length, max_u_length, unrestricted, **options):
        pm = ResidualController.compute_pm(
            automaton, m, max_g_length=max_g_length, max_u_length=max_u_length, stabilized=not unrestricted
        )
        for (x, y), (g, u) in pm.pairs.items():
            self.write(f"{x}\t{y}\t{g}\t{u}")

    def handle_nrf(self, automaton, citation, strategy, max_elements, corpus_size, seed, **options):
        report = ResidualController.nrf_report(
            automaton,
            citation=citation or CatalogController.citation(automaton),
            strategy=strategy,
            max_elements=max_elements,
            corpus_size=corpus_size,
            seed=seed,
        )
        self.write(report.serialize())

    # Cosets

    def handle_tc(self, presentation, max_cosets, strategy, output_format, extra, subgroup, **options):
        group = presentation.presentation
        if extra:
            group = group._replace(relators=list(group.relators) + list(presentation.extra))
        subgroup = presentation.subgroup if subgroup else ()
        table = CosetController.todd_coxeter(group, subgroup, cap=max_cosets, strategy=strategy)
        if output_format == FORMATS.TEXT:
            verified = CosetController.verify_table(table, group, subgroup)
            self.write(f"{table.status} index={table.index} defined={table.defined} verified={str(verified).lower()}")
        self.write(table)

    def handle_quotient(self, presentation, max_cosets, strategy, **options):
        order = CosetController.quotient_order(
            presentation.presentation, presentation.extra, cap=max_cosets, strategy=strategy
        )
        self.write(order)

    # Catalog

    def handle_enumerate(self, states, letters, vh4, policy, max_elements, **options):
        if vh4:
            self.write(CatalogController.enumerate_vh4(policy=policy, max_elements=max_elements))
        else:
            self.write(CatalogController.enumerate(states, letters, policy=policy, max_elements=max_elements))

    def handle_reproduce(self, name, **options):
        records = reproduce_all() if name == ALL else [reproduce(name)]
        failed = [record.name for record in records if not record.passed]
        self.write("\n".join(record.serialize() for record in records))
        if failed:
            self.stderr.write(style(titleize(f"failed: {' '.join(failed)}"), Colors.error))
            raise CommandError(f"{len(failed)} experiment(s) failed", returncode=1)
        self.stderr.write(style(titleize(f"{len(records)} passed"), Colors.success))
