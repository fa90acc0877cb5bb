"""FastAPI application wrapping the core package.

All handlers are stateless pass-throughs to the pure core functions.
Application-level rejections use HTTP 422 with a structured detail
{"code": "invalid_input" | "capacity", "message": ...} so the CLI can map
them onto its exit codes.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from gatemargin import __version__, dense, ltg, synthesis, verify, wms
from gatemargin import matchgates as mg
from gatemargin.errors import CapacityError
from gatemargin.service import models


def _invalid(message: str) -> HTTPException:
    return HTTPException(status_code=422, detail={"code": "invalid_input", "message": message})


def _capacity(message: str) -> HTTPException:
    return HTTPException(status_code=422, detail={"code": "capacity", "message": message})


def _parse_table(text: str, n: int | None) -> ltg.BooleanFunction:
    try:
        if text.lower().startswith("0x"):
            return ltg.BooleanFunction.from_hex(text, n)
        f = ltg.BooleanFunction.from_table(text)
    except ValueError as exc:
        raise _invalid(str(exc)) from exc
    if n is not None and f.n != n:
        raise _invalid(f"table of length {len(f.bits)} does not match n={n}")
    return f


def _circuit_from_model(model: models.CircuitModel) -> mg.MatchgateCircuit:
    try:
        return mg.circuit_from_dict(model.to_core_dict())
    except ValueError as exc:
        raise _invalid(str(exc)) from exc


def _circuit_to_model(circuit: mg.MatchgateCircuit) -> models.CircuitModel:
    return models.CircuitModel.model_validate(mg.circuit_to_dict(circuit))


def create_app() -> FastAPI:
    app = FastAPI(title="gatemargin", version=__version__)

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/analyze", response_model=models.AnalyzeResponse)
    def analyze(request: models.AnalyzeRequest) -> models.AnalyzeResponse:
        f = _parse_table(request.table, request.n)
        try:
            result = ltg.optimal_margin(f)
        except CapacityError as exc:
            raise _capacity(str(exc)) from exc
        deps = sorted(ltg.dependent_variables(f))
        if isinstance(result, ltg.InfeasibilityCertificate):
            return models.AnalyzeResponse(
                table=f.table_string(),
                n=f.n,
                is_ltg=False,
                dependent_variables=deps,
                infeasibility=[
                    models.RationalModel.from_fraction(l) for l in result.lambdas
                ],
            )
        achieved = ltg.truncate_to_integer(result.representation(), result.epsilon)
        lower = 1 / result.epsilon
        upper = 2 * Fraction(f.n + 1) / result.epsilon
        exact = [models.RationalModel.from_fraction(Fraction(v)) for v in result.w]
        exact.append(models.RationalModel.from_fraction(Fraction(result.theta)))
        rep = result.representation().as_floats()
        return models.AnalyzeResponse(
            table=f.table_string(),
            n=f.n,
            is_ltg=True,
            margin=models.RationalModel.from_fraction(result.epsilon),
            optimal_probability=models.RationalModel.from_fraction(result.optimal_probability()),
            dependent_variables=deps,
            representation=models.RepresentationModel(w=list(rep.w), theta=rep.theta),
            representation_exact=exact,
            witness_input="".join(str(b) for b in result.witness_input),
            weight_bounds=models.WeightBoundsModel(
                lower=models.RationalModel.from_fraction(lower),
                upper=models.RationalModel.from_fraction(upper),
            ),
            integer_representation=models.IntegerRepresentationModel(
                v=list(achieved.v), phi=achieved.phi, weight=achieved.weight
            ),
        )

    @app.post("/synthesize", response_model=models.SynthesizeResponse)
    def synthesize(request: models.SynthesizeRequest) -> models.SynthesizeResponse:
        if (request.table is None) == (request.representation is None):
            raise _invalid("pass exactly one of 'table' or 'representation'")
        if request.table is not None:
            f = _parse_table(request.table, request.n)
            try:
                result = ltg.optimal_margin(f)
            except CapacityError as exc:
                raise _capacity(str(exc)) from exc
            if isinstance(result, ltg.InfeasibilityCertificate):
                lambdas = ", ".join(str(l) for l in result.lambdas)
                raise _invalid(
                    "not a linear threshold gate; the margin program is infeasible "
                    f"for any positive margin (certificate weights {lambdas})"
                )
            rep = result.representation().as_floats()
            epsilon = float(result.epsilon)
            table = f
        else:
            rep = ltg.LtgRepresentation(
                tuple(request.representation.w), request.representation.theta
            )
            epsilon = None
            table = None
        try:
            synth = synthesis.synthesize_ltg_circuit(rep, epsilon=epsilon)
        except ValueError as exc:
            raise _invalid(str(exc)) from exc
        if table is None:
            table = ltg.function_of_representation(rep)
        min_prob = mg.computes_function(synth.rotation, table.bits, table.n)
        verified = min_prob >= synth.promised_probability - 1e-8
        return models.SynthesizeResponse(
            circuit=_circuit_to_model(synth.circuit),
            metadata=models.SynthesisMetadataModel(
                n=synth.representation.n,
                margin=synth.margin,
                promised_probability=synth.promised_probability,
                representation=models.RepresentationModel(
                    w=list(synth.representation.w), theta=synth.representation.theta
                ),
                gate_count=synth.gate_count,
            ),
            rotation=mg.rotation_to_lists(synth.rotation),
            verified=verified,
            min_probability=min_prob,
        )

    @app.post("/simulate", response_model=models.SimulateResponse)
    def simulate(request: models.SimulateRequest) -> models.SimulateResponse:
        circuit = _circuit_from_model(request.circuit)
        try:
            bits = mg.parse_bits(request.input, circuit.num_qubits)
        except ValueError as exc:
            raise _invalid(str(exc)) from exc
        rotation_p0 = dense_p0 = None
        if request.backend in ("rotation", "both"):
            rotation = mg.compile_circuit(circuit)
            rotation_p0 = mg.success_probability(rotation, bits, 0)
        if request.backend in ("dense", "both"):
            try:
                dense_p0 = dense.measure_qubit1_prob0(dense.apply_circuit(circuit, bits))
            except CapacityError as exc:
                raise _capacity(str(exc)) from exc
        if request.backend == "dense":
            return models.SimulateResponse(
                backend="dense", p0=dense_p0, expectation_z1=2 * dense_p0 - 1
            )
        if request.backend == "rotation":
            return models.SimulateResponse(
                backend="rotation", p0=rotation_p0, expectation_z1=2 * rotation_p0 - 1
            )
        return models.SimulateResponse(
            backend="both",
            p0=rotation_p0,
            expectation_z1=2 * rotation_p0 - 1,
            dense_p0=dense_p0,
            dense_expectation_z1=2 * dense_p0 - 1,
            discrepancy=abs(rotation_p0 - dense_p0),
        )

    @app.post("/wms/run", response_model=models.WmsRunResponse)
    def wms_run(request: models.WmsRunRequest) -> models.WmsRunResponse:
        sources = [request.program, request.representation, request.table]
        if sum(s is not None for s in sources) != 1:
            raise _invalid("pass exactly one of 'program', 'representation', or 'table'")
        f = None
        try:
            if request.program is not None:
                prog = wms.WmsProgram.from_dict(request.program.model_dump())
            elif request.representation is not None:
                rep = ltg.LtgRepresentation(
                    tuple(request.representation.w), request.representation.theta
                )
                prog = wms.from_representation(rep)
                f = ltg.function_of_representation(rep)
            else:
                f = _parse_table(request.table, None)
                result = ltg.optimal_margin(f)
                if isinstance(result, ltg.InfeasibilityCertificate):
                    raise _invalid("not a linear threshold gate; no sampler program exists")
                prog = wms.from_representation(result.representation().as_floats())
            bits = mg.parse_bits(request.input, prog.n)
            expectation = wms.exact_output_expectation(prog, bits)
        except CapacityError as exc:
            raise _capacity(str(exc)) from exc
        except ValueError as exc:
            raise _invalid(str(exc)) from exc
        response = models.WmsRunResponse(
            program=models.WmsProgramModel.model_validate(prog.to_dict()),
            output_expectation=expectation,
            probability_output0=(1.0 + expectation) / 2.0,
            samples=request.samples,
            seed=request.seed,
        )
        if f is not None:
            response.success_probability = wms.exact_success_probability(prog, f, bits)
        if request.samples > 0:
            outputs = wms.sample_bits(prog, bits, request.samples, request.seed)
            response.empirical_frequency_output0 = float(np.mean(outputs == 0))
        return response

    @app.get("/census/{n}", response_class=PlainTextResponse)
    def census(n: int) -> PlainTextResponse:
        try:
            entries = ltg.exhaustive_ltg_census(n)
        except CapacityError as exc:
            raise _capacity(str(exc)) from exc
        except ValueError as exc:
            raise _invalid(str(exc)) from exc
        count = sum(e.is_ltg for e in entries)
        return PlainTextResponse(
            ltg.census_csv(entries),
            media_type="text/csv",
            headers={"X-LTG-Count": str(count)},
        )

    @app.post("/verify", response_model=models.VerifyResponse)
    def run_verify(request: models.VerifyRequest) -> models.VerifyResponse:
        report = verify.run_suite(request.level, seed=request.seed)
        return models.VerifyResponse.model_validate(report.to_dict())

    return app
