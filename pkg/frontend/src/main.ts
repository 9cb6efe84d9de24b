/** Application shell: wires the prompt builder, keyframe editor, viewer,
 * blend slider, segment cards, and replayable history together against
 * the HTTP service. */

import { ApiClient } from "./api";
import { blendReady, blendRequest, detents, makeBlend, snap } from "./blend";
import { frontEyeLevel, toRequestBlock } from "./keyframes";
import type { KeyframeState } from "./keyframes";
import { buildPrompt, canSend } from "./prompt";
import type { PromptParts } from "./prompt";
import { toSequenceRequest } from "./segments";
import type { SegmentCard } from "./segments";
import {
  appendHistory,
  initialState,
  replayRequest,
} from "./state";
import type { Endpoint, HistoryEntry } from "./state";
import type {
  GenerateRequest,
  InterpolateRequest,
  SequenceRequest,
  TrajectoryResponse,
  Vocab,
} from "./types";
import {
  DEFAULT_VIEW,
  clampScrub,
  framingMarker,
  overlayColor,
  renderScene,
} from "./viewer";
import type { Overlay } from "./viewer";

const api = new ApiClient();
const state = initialState();
const blend = makeBlend();
const cards: SegmentCard[] = [];
let overlays: Overlay[] = [];
let scrub = 0;

const el = <K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] => {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text) node.textContent = text;
  return node;
};

function buildSelect(
  label: string,
  options: string[],
  onChange: (value: string | undefined) => void,
): HTMLLabelElement {
  const wrap = el("label", { class: "field" }, label);
  const select = el("select");
  select.appendChild(el("option", { value: "" }, "—"));
  for (const option of options) {
    select.appendChild(el("option", { value: option }, option));
  }
  select.addEventListener("change", () => onChange(select.value || undefined));
  wrap.appendChild(select);
  return wrap;
}

async function runApp(root: HTMLElement, vocab: Vocab) {
  const parts: PromptParts = state.parts;
  const keyframes: KeyframeState = state.keyframes;

  // --- prompt builder ---------------------------------------------------
  const promptPanel = el("section", { class: "panel" });
  promptPanel.appendChild(el("h2", {}, "Prompt"));
  const preview = el("pre", { class: "preview" });
  const sendButton = el("button", { disabled: "" }, "Generate");
  const seedInput = el("input", { type: "number", value: "0" });

  const refreshPreview = () => {
    preview.textContent = buildPrompt(parts, vocab);
    if (canSend(parts, vocab)) sendButton.removeAttribute("disabled");
    else sendButton.setAttribute("disabled", "");
  };

  const set = <K extends keyof PromptParts>(key: K) => (value: string | undefined) => {
    parts[key] = value as PromptParts[K];
    refreshPreview();
  };

  promptPanel.appendChild(buildSelect("movement", vocab.movements, set("movement")));
  promptPanel.appendChild(buildSelect("angle", vocab.angles, set("angle")));
  promptPanel.appendChild(buildSelect("direction start", vocab.directions, set("directionStart")));
  promptPanel.appendChild(buildSelect("direction end", vocab.directions, set("directionEnd")));
  promptPanel.appendChild(buildSelect("screen x", vocab.screen_x, set("screenX")));
  promptPanel.appendChild(buildSelect("screen y", vocab.screen_y, set("screenY")));
  promptPanel.appendChild(buildSelect("scale start", vocab.scales, set("scaleStart")));
  promptPanel.appendChild(buildSelect("scale end", vocab.scales, set("scaleEnd")));
  promptPanel.appendChild(buildSelect("velocity", vocab.velocities, set("velocity")));
  const freeText = el("input", { type: "text", placeholder: "free text" });
  freeText.addEventListener("input", () => {
    parts.freeText = freeText.value;
    refreshPreview();
  });
  promptPanel.appendChild(freeText);
  promptPanel.appendChild(el("label", { class: "field" }, "seed")).appendChild(seedInput);
  promptPanel.appendChild(preview);
  promptPanel.appendChild(sendButton);

  // --- keyframe editor --------------------------------------------------
  const kfPanel = el("section", { class: "panel" });
  kfPanel.appendChild(el("h2", {}, "Keyframes"));
  const kfInputs: Record<"start" | "end", HTMLInputElement[]> = { start: [], end: [] };
  for (const which of ["start", "end"] as const) {
    const row = el("div", { class: "kf-row" }, `${which}: `);
    const toggle = el("input", { type: "checkbox" });
    row.appendChild(toggle);
    for (let i = 0; i < 5; i++) {
      const input = el("input", { type: "number", step: "0.1", value: "0" });
      input.addEventListener("input", () => {
        if (keyframes[which]) {
          keyframes[which]![i] = Number(input.value) || 0;
        }
      });
      kfInputs[which].push(input);
      row.appendChild(input);
    }
    const preset = el("button", {}, "front eye 2m");
    preset.addEventListener("click", () => {
      toggle.checked = true;
      keyframes[which] = frontEyeLevel();
      keyframes[which]!.forEach((v, i) => (kfInputs[which][i].value = String(v)));
    });
    toggle.addEventListener("change", () => {
      keyframes[which] = toggle.checked
        ? (kfInputs[which].map((inp) => Number(inp.value) || 0) as KeyframeState["start"])
        : undefined;
    });
    row.appendChild(preset);
    kfPanel.appendChild(row);
  }

  // --- viewer -----------------------------------------------------------
  const viewerPanel = el("section", { class: "panel" });
  viewerPanel.appendChild(el("h2", {}, "Trajectory"));
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("id", "scene");
  viewerPanel.appendChild(svg);
  const scrubber = el("input", { type: "range", min: "0", max: "0", value: "0" });
  const framing = el("div", { class: "framing" });
  const framingDot = el("div", { class: "framing-dot" });
  framing.appendChild(framingDot);
  const legend = el("div", { class: "legend" });
  viewerPanel.appendChild(scrubber);
  viewerPanel.appendChild(framing);
  viewerPanel.appendChild(legend);

  const redraw = () => {
    renderScene(svg, overlays, DEFAULT_VIEW);
    const frames = overlays[0]?.trajectory.frames ?? [];
    scrubber.setAttribute("max", String(Math.max(0, frames.length - 1)));
    scrub = clampScrub(scrub, frames.length);
    scrubber.value = String(scrub);
    if (frames.length) {
      const marker = framingMarker(frames[scrub]);
      framingDot.style.left = `${50 + marker.x * 33}%`;
      framingDot.style.top = `${50 + marker.y * 33}%`;
    }
    legend.innerHTML = "";
    overlays.forEach((overlay, i) => {
      const chip = el("span", { class: "chip" }, overlay.label);
      chip.style.color = overlayColor(i);
      legend.appendChild(chip);
    });
  };
  scrubber.addEventListener("input", () => {
    scrub = clampScrub(Number(scrubber.value), overlays[0]?.trajectory.frames.length ?? 0);
    redraw();
  });

  const showResult = (label: string, response: TrajectoryResponse, overlay: boolean) => {
    const item: Overlay = { trajectory: response.trajectory, label };
    overlays = overlay ? [...overlays, item] : [item];
    redraw();
  };

  // --- history ----------------------------------------------------------
  const historyPanel = el("section", { class: "panel" });
  historyPanel.appendChild(el("h2", {}, "History"));
  const historyList = el("ul", { class: "history" });
  historyPanel.appendChild(historyList);

  const issue = async (
    endpoint: Endpoint,
    request: GenerateRequest | InterpolateRequest | SequenceRequest,
  ): Promise<TrajectoryResponse> => {
    const response =
      endpoint === "generate"
        ? await api.generate(request as GenerateRequest)
        : endpoint === "interpolate"
          ? await api.interpolate(request as InterpolateRequest)
          : await api.sequence(request as SequenceRequest);
    const entry = appendHistory(state, endpoint, request, response);
    const item = el("li", {}, `#${entry.index} ${endpoint} seed=${entry.seed}`);
    item.addEventListener("click", () => replay(entry));
    historyList.appendChild(item);
    return response;
  };

  const replay = async (entry: HistoryEntry) => {
    const request = replayRequest(entry);
    const response =
      entry.endpoint === "generate"
        ? await api.generate(request as GenerateRequest)
        : entry.endpoint === "interpolate"
          ? await api.interpolate(request as InterpolateRequest)
          : await api.sequence(request as SequenceRequest);
    showResult(`replay #${entry.index} seed ${response.seed}`, response, true);
  };

  sendButton.addEventListener("click", async () => {
    const request: GenerateRequest = {
      prompt: buildPrompt(parts, vocab),
      seed: Number(seedInput.value) || 0,
    };
    const block = toRequestBlock(keyframes);
    if (block) request.keyframes = block;
    const response = await issue("generate", request);
    showResult(`seed ${response.seed}`, response, false);
  });

  // --- blend slider -----------------------------------------------------
  const blendPanel = el("section", { class: "panel" });
  blendPanel.appendChild(el("h2", {}, "Blend"));
  const pinA = el("button", {}, "pin A");
  const pinB = el("button", {}, "pin B");
  const labels = el("div", { class: "blend-labels" });
  const slider = el("input", {
    type: "range", min: "0", max: "1", step: String(blend.step), value: "0", disabled: "",
  });
  const refreshBlend = () => {
    labels.textContent = `A: ${blend.promptA ?? "—"}  |  B: ${blend.promptB ?? "—"}  |  λ detents: ${detents(blend).join(", ")}`;
    if (blendReady(blend)) slider.removeAttribute("disabled");
    else slider.setAttribute("disabled", "");
  };
  pinA.addEventListener("click", () => {
    blend.promptA = buildPrompt(parts, vocab);
    refreshBlend();
  });
  pinB.addEventListener("click", () => {
    blend.promptB = buildPrompt(parts, vocab);
    refreshBlend();
  });
  slider.addEventListener("change", async () => {
    blend.lambda = snap(blend, Number(slider.value));
    const request = blendRequest(blend, Number(seedInput.value) || 0);
    const response = await issue("interpolate", request);
    showResult(`λ=${blend.lambda} seed ${response.seed}`, response, true);
  });
  refreshBlend();
  blendPanel.append(pinA, pinB, slider, labels);

  // --- segment cards ----------------------------------------------------
  const seqPanel = el("section", { class: "panel" });
  seqPanel.appendChild(el("h2", {}, "Sequence"));
  const cardList = el("div", { class: "cards" });
  const addCard = el("button", {}, "add segment from prompt");
  const runSeq = el("button", { disabled: "" }, "run sequence");
  addCard.addEventListener("click", () => {
    const card: SegmentCard = { prompt: buildPrompt(parts, vocab), frames: 60 };
    const block = toRequestBlock(keyframes);
    if (block) card.keyframes = block;
    cards.push(card);
    const chip = el("div", { class: "card" }, `${card.frames}f · ${card.prompt}`);
    cardList.appendChild(chip);
    runSeq.removeAttribute("disabled");
  });
  runSeq.addEventListener("click", async () => {
    const request = toSequenceRequest(cards, { seed: Number(seedInput.value) || 0 });
    const response = await issue("sequence", request);
    showResult(`sequence seed ${response.seed}`, response, false);
  });
  seqPanel.append(addCard, runSeq, cardList);

  root.append(promptPanel, kfPanel, viewerPanel, blendPanel, seqPanel, historyPanel);
  refreshPreview();
  redraw();
}

async function boot() {
  const root = document.getElementById("app");
  if (!root) return;
  try {
    const [health, vocab] = await Promise.all([api.health(), api.vocab()]);
    if (!health.ready) {
      root.textContent = "Service is up but no checkpoint is loaded (503s expected).";
    }
    await runApp(root, vocab);
  } catch (error) {
    root.textContent = `Cannot reach the service: ${String(error)}`;
  }
}

boot();

export { runApp };
