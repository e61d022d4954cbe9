/** View state and its legal transitions.
 *
 * Pending edits always apply to the pinned codebook version; a save
 * either clears them (success) or keeps them and records the conflict
 * (someone else saved first).
 */

import { PendingEdit, Scope } from "./types.js";

export interface ViewState {
  courseId: string;
  discussionId: string | null;
  pinnedVersion: number | null;
  scope: Scope;
  selectedStudent: string | null;
  pendingEdits: PendingEdit[];
  conflict: string | null;
}

export function initialState(courseId: string): ViewState {
  return {
    courseId,
    discussionId: null,
    pinnedVersion: null,
    scope: "all",
    selectedStudent: null,
    pendingEdits: [],
    conflict: null,
  };
}

export function selectDiscussion(state: ViewState, discussionId: string): ViewState {
  return {
    ...state,
    discussionId,
    pinnedVersion: null,
    selectedStudent: null,
    pendingEdits: [],
    conflict: null,
  };
}

export function pinVersion(state: ViewState, version: number): ViewState {
  if (state.pinnedVersion === version) return state;
  // a new base version invalidates edits queued against the old one
  return { ...state, pinnedVersion: version, pendingEdits: [], conflict: null };
}

export function toggleScope(state: ViewState): ViewState {
  return { ...state, scope: state.scope === "all" ? "initial_only" : "all" };
}

export function selectStudent(state: ViewState, studentId: string | null): ViewState {
  return { ...state, selectedStudent: studentId };
}

export function queueEdit(state: ViewState, edit: PendingEdit): ViewState {
  return { ...state, pendingEdits: [...state.pendingEdits, edit], conflict: null };
}

export function dropEdit(state: ViewState, index: number): ViewState {
  return { ...state, pendingEdits: state.pendingEdits.filter((_, i) => i !== index) };
}

export function saveSucceeded(state: ViewState, newVersion: number): ViewState {
  return { ...state, pinnedVersion: newVersion, pendingEdits: [], conflict: null };
}

export function saveConflicted(state: ViewState, detail: string): ViewState {
  // keep the instructor's work; the conflict view shows what changed
  return { ...state, conflict: detail };
}
