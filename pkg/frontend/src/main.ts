// Entry point: reads ?campaign=&judge=&server= from the URL, then loops
// assignments until the queue drains.

import { ApiClient, ApiError, AssignmentPayload } from "./api.js";
import { AnnotationForm } from "./form.js";
import { serverFormat } from "./scoring.js";

function errorScreen(root: HTMLElement, message: string, retry: () => void): void {
  root.textContent = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = message;
  const btn = document.createElement("button");
  btn.textContent = "Retry";
  btn.addEventListener("click", retry);
  root.append(p, btn);
}

function doneScreen(root: HTMLElement): void {
  root.textContent = "";
  const p = document.createElement("p");
  p.textContent = "All assignments complete. Thank you.";
  root.appendChild(p);
}

function validPayload(payload: AssignmentPayload): boolean {
  return (
    typeof payload.assignment_id === "string" &&
    typeof payload.source_text === "string" &&
    typeof payload.target_text === "string" &&
    Array.isArray(payload.rubric?.features) &&
    payload.rubric.features.length === 11
  );
}

export async function runSession(
  root: HTMLElement,
  client: ApiClient,
  judgeId: string,
): Promise<void> {
  let activeForm: AnnotationForm | null = null;
  document.addEventListener("keydown", (e) => activeForm?.handleKey(e));

  const loadNext = async (): Promise<void> => {
    let payload: AssignmentPayload | null;
    try {
      payload = await client.nextAssignment(judgeId);
    } catch (err) {
      errorScreen(root, `Could not load the next assignment: ${err}`, () => {
        void loadNext();
      });
      return;
    }
    if (payload === null) {
      activeForm = null;
      doneScreen(root);
      return;
    }
    if (!validPayload(payload)) {
      errorScreen(root, "Received a malformed assignment payload.", () => {
        void loadNext();
      });
      return;
    }
    const current = payload;
    activeForm = new AnnotationForm(root, current, async (scores) => {
      let overwrite = false;
      for (;;) {
        try {
          const resp = await client.submit(current.assignment_id, scores, overwrite);
          const expected = serverFormat(activeForm!.selections);
          if (expected !== null && expected !== resp.final_score) {
            console.warn(
              `preview/server mismatch: ${expected} vs ${resp.final_score}`,
            );
          }
          await loadNext();
          return;
        } catch (err) {
          if (err instanceof ApiError && err.status === 409 && !overwrite) {
            if (window.confirm("A newer annotation exists. Overwrite it?")) {
              overwrite = true;
              continue;
            }
            await loadNext();
            return;
          }
          throw err; // network failure: form keeps the selections for retry
        }
      }
    });
  };

  await loadNext();
}

export function bootstrap(): void {
  const params = new URLSearchParams(window.location.search);
  const server = params.get("server") ?? "";
  const campaign = params.get("campaign");
  const judge = params.get("judge");
  const root = document.getElementById("app");
  if (!root) return;
  if (!campaign || !judge) {
    root.textContent = "Missing ?campaign= and ?judge= query parameters.";
    return;
  }
  void runSession(root, new ApiClient(server, campaign), judge);
}

if (typeof window !== "undefined" && document.getElementById("app")) {
  bootstrap();
}
